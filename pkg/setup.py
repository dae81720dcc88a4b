from setuptools import setup

setup(
    name='latdisc',
    version='0.1',
    packages=['latdisc', 'lattice_counter', 'discrepancy', 'special_functions',
              'fourier_coeffs', 'moment_estimator'],
    install_requires=[
        'numpy>=1.24',
        'scipy>=1.10',
        'sympy>=1.12',
        'pydantic>=2.0.0',
        'python-dotenv>=1.0.0',
    ],
    extras_require={
        'test': ['mpmath>=1.3'],
    },
    entry_points={
        'console_scripts': [
            'latdisc=latdisc.main:main'
        ],
    },
    package_dir={'': '.'},
    python_requires='>=3.9',
)
