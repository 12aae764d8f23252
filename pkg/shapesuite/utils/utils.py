import json
import os

import numpy as np
import yaml


def print_arguments(args):
    print("-----------  Configuration Arguments -----------")
    for arg, value in sorted(vars(args).items()):
        print("%s: %s" % (arg, value))
    print("------------------------------------------------")


def str2bool(value):
    if isinstance(value, bool):
        return value
    value = str(value).strip().lower()
    if value in ('y', 'yes', 't', 'true', 'on', '1'):
        return True
    if value in ('n', 'no', 'f', 'false', 'off', '0'):
        return False
    raise ValueError('无法解析的布尔值: %r' % value)


def str2ints(value):
    """解析逗号分隔的整数列表，例如 1,2,4,8"""
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    return [int(v) for v in str(value).split(',') if v.strip() != '']


def str2strs(value):
    if value is None or isinstance(value, (list, tuple)):
        return value
    return [v.strip() for v in str(value).split(',') if v.strip() != '']


def add_arguments(argname, type, default, help, argparser, **kwargs):
    type = str2bool if type == bool else type
    argparser.add_argument("--" + argname.replace('_', '-'),
                           dest=argname,
                           default=default,
                           type=type,
                           help=help + ' 默认: %(default)s.',
                           **kwargs)


def load_config(config_path, section):
    """读取yaml配置文件中的某一部分

    :param config_path: 配置文件路径，为None时返回空配置
    :type config_path: str
    :param section: 配置段名称，例如extract、validate、synth
    :type section: str
    :return: 配置参数，键与命令行参数名一致
    :rtype: dict
    :raises IOError: 配置文件不存在
    :raises ValueError: 配置文件格式错误
    """
    if config_path is None:
        return {}
    if not os.path.exists(config_path):
        raise IOError('配置文件不存在: %s' % config_path)
    with open(config_path, 'r', encoding='utf-8') as f:
        configs = yaml.safe_load(f) or {}
    if not isinstance(configs, dict):
        raise ValueError('配置文件的顶层必须是字典: %s' % config_path)
    section_configs = configs.get(section) or {}
    if not isinstance(section_configs, dict):
        raise ValueError('配置段%s必须是字典' % section)
    return {k.replace('-', '_'): v for k, v in section_configs.items()}


def apply_config(parser, argv=None, section=None):
    """先解析--config参数，把配置文件的值设为默认值，再解析全部参数，使命令行参数优先"""
    pre_args, _ = parser.parse_known_args(argv)
    configs = load_config(getattr(pre_args, 'config', None), section)
    known = {action.dest: action for action in parser._actions}
    defaults = {}
    for key, value in configs.items():
        if key not in known:
            raise ValueError('配置文件中存在未知参数: %s' % key)
        action = known[key]
        if action.type is not None and value is not None and not isinstance(value, (list, tuple)):
            value = action.type(value)
        elif action.type is not None and isinstance(value, (list, tuple)):
            value = action.type(','.join(str(v) for v in value))
        defaults[key] = value
    parser.set_defaults(**defaults)
    return parser.parse_args(argv)


def num_threads(requested=None):
    """线程数量，受环境变量SHAPESUITE_THREADS限制"""
    limit = os.cpu_count() or 1
    env_value = os.environ.get('SHAPESUITE_THREADS')
    if env_value:
        try:
            limit = max(1, int(env_value))
        except ValueError:
            raise ValueError('SHAPESUITE_THREADS必须是正整数: %r' % env_value)
    if requested is not None and requested > 0:
        return min(requested, limit)
    return limit


def format_float(value):
    """把浮点数格式化为与平台无关的字符串，NaN和None输出为空"""
    if value is None:
        return ''
    value = float(value)
    if not np.isfinite(value):
        return ''
    return repr(round(value, 12))


class NumpyEncoder(json.JSONEncoder):
    """json序列化numpy类型，NaN写为null"""

    def default(self, o):
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, (set, frozenset)):
            return sorted(o)
        return super().default(o)


def to_json_safe(value):
    """递归把NaN/inf转为None，保证输出严格的json"""
    if isinstance(value, dict):
        return {k: to_json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json_safe(v) for v in value]
    if isinstance(value, (float, np.floating)):
        return float(value) if np.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def dump_json(obj, path):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(to_json_safe(obj), f, cls=NumpyEncoder, ensure_ascii=False, indent=2, sort_keys=False)
        f.write('\n')
