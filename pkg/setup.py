'''
Setup for isaacsfd that describes it's contents and how to install it.
'''
from setuptools import setup, find_packages

# List of dependencies for the package
# >= Can be used to specify a minimum version
# >=,< Can be used to specify a minimum and maximum version e.g. 'numpy>=1.15,<1.20',
dependencies = [
        'numpy>=1.22',
        'scipy>=1.9',
]

setup(
    # Name of the repository
    name='IsaacsFD',
    # Version of the software (keep this up to date with git tags/releases)
    version='0.1.0',
    # Short description of the package
    description='Monotone finite-difference solvers and convergence experiments for Isaacs equations',
    # Minimum version of python required
    python_requires='>=3.9',
    # Name of your package, should be the same as the name of the directory
    packages=find_packages(include=['isaacsfd', 'isaacsfd.*']),
    # Dependencies for the package
    install_requires=dependencies,
    extras_require={
        'test': ['pytest>=7'],
    },
    # Scripts that will be run on the command line
    entry_points={
        'console_scripts': [
            'isaacsfd=isaacsfd.experiments.cli:main',
        ],
    },
)
