import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name="torsionnodes",
    version="0.1.0",
    author="torsionnodes developers",
    description="Numerical and exact checks for arrangements of torsion-translated curves on complex tori",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(),
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: POSIX",
        "Programming Language :: Python :: 3.8",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires='>=3.8',
    install_requires=[
        'numpy>=1.20',
        'sympy>=1.7',
        'PyYAML'
    ],
    extras_require={
        'tests': ['hypothesis>=6', 'mpmath>=1.1']
    },
    entry_points={
        'console_scripts': ['torsionnodes=torsionnodes.api.cli:main']
    }
)
