from setuptools import setup, find_packages

setup(
    name="mimo_dos",
    version="0.1.0",
    packages=find_packages(exclude=['examples', 'examples.*']),
    package_data={
        'mimo_dos': ['config/*.yaml'],
    },
    install_requires=[
        'pandas',
        'numpy',
        'scipy',
        'click',
        'pytest',
        'pyyaml',
        'tqdm'
    ],
    entry_points={
        'console_scripts': [
            'mimo-dos=mimo_dos.cli.main:main',
        ],
    },
    python_requires='>=3.10',
)
