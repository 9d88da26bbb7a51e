from setuptools import setup, find_packages

# This file is kept for backward compatibility
# The actual configuration is in pyproject.toml

setup(
    name="viprox",
    version="0.1.0",
    packages=find_packages(include=['viprox*']),
    package_data={'viprox.harness.configs': ['*.yaml']},
    python_requires='>=3.9',
    install_requires=[
        'numpy>=1.24.0',
        'scipy>=1.10.0',
        'pydantic>=2.0.0,<3.0.0',
        'pydantic-settings>=2.0.0',
        'typing-extensions>=4.0.0',
        'typer>=0.9.0',
        'rich>=12.5.1',
        'PyYAML>=6.0',
        'python-json-logger>=2.0.0',
    ],
    extras_require={
        'dev': [
            'pytest>=7.0.0',
            'pytest-cov>=4.0.0',
            'black>=23.0.0',
            'isort>=5.0.0',
            'mypy>=1.0.0',
        ],
    },
    entry_points={'console_scripts': ['viprox=viprox.harness.cli:app']},
    author="Navdeep Gill",
    author_email="mr.navdeepgill@gmail.com",
    description="Adaptive extra-gradient and AdaProx solvers for monotone variational inequalities",
    long_description=open('README.md').read(),
    long_description_content_type="text/markdown",
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
)
