from setuptools import setup, find_packages

SHAPESUITE_VERSION = "0.1.0"


def readme():
    with open('README.md', encoding='utf-8') as f:
        content = f.read()
    return content


def parse_requirements():
    with open('./requirements.txt', encoding="utf-8") as f:
        requirements = [line.strip() for line in f.readlines() if line.strip()]
    return requirements


if __name__ == "__main__":
    setup(
        name='shapesuite',
        packages=find_packages(exclude=['tests', 'tests.*']),
        author='yeyupiaoling',
        version=SHAPESUITE_VERSION,
        install_requires=parse_requirements(),
        extras_require={'test': ['pytest>=6.2']},
        description='2D shape descriptors of segmentation maps and minimum-dependence feature validation',
        long_description=readme(),
        long_description_content_type='text/markdown',
        keywords=['shape descriptors', 'morphology', 'obia', 'chi-square'],
        classifiers=[
            'Intended Audience :: Developers',
            'Intended Audience :: Science/Research',
            'License :: OSI Approved :: Apache Software License',
            'Operating System :: OS Independent',
            'Natural Language :: Chinese (Simplified)',
            'Programming Language :: Python :: 3',
            'Programming Language :: Python :: 3.8',
            'Programming Language :: Python :: 3.9',
            'Programming Language :: Python :: 3.10',
            'Topic :: Scientific/Engineering :: Image Processing'
        ],
        license='Apache License 2.0',
        python_requires='>=3.8',
        ext_modules=[])
