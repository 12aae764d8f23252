import logging
import sys

_FORMAT = '[%(asctime)s.%(msecs)03d %(levelname)s] %(message)s'
_DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def setup_logger(name, level=logging.INFO):
    """获取日志记录器，输出到stderr，格式与训练日志一致

    :param name: 日志记录器名称，一般为模块的__name__
    :type name: str
    :param level: 日志级别
    :type level: int
    :return: 日志记录器
    :rtype: logging.Logger
    """
    logger = logging.getLogger(name)
    if not logger.handlers:
        handler = logging.StreamHandler(stream=sys.stderr)
        handler.setFormatter(logging.Formatter(_FORMAT, datefmt=_DATE_FORMAT))
        logger.addHandler(handler)
        logger.setLevel(level)
        logger.propagate = False
    return logger
