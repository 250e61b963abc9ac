"""
Setup configuration for the Reduction Engine
"""

from setuptools import setup
import os

# Read README for long description
readme_path = os.path.join(os.path.dirname(__file__), '..', 'README.md')
if os.path.exists(readme_path):
    with open(readme_path, 'r', encoding='utf-8') as f:
        long_description = f.read()
else:
    long_description = "OuMv reductions to dynamic graph problems, with verifiers and a benchmark harness"

setup(
    name="oumv-reduction-engine",
    version="1.0.0",
    author="Reduction Engine Team",
    description="OuMv reductions to dynamic matching, s-t distance and densest subgraph",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=[
        'ReductionEngine',
        'ReductionEngine.src',
        'ReductionEngine.src.oumv',
        'ReductionEngine.src.graph',
        'ReductionEngine.src.expanders',
        'ReductionEngine.src.gadgets',
        'ReductionEngine.src.harness',
    ],
    package_dir={'ReductionEngine': '.'},
    include_package_data=True,
    package_data={
        'ReductionEngine': ['data/*.json'],
    },
    install_requires=[
        "numpy>=1.19.0",
        "networkx>=2.6",
    ],
    extras_require={
        'test': ['pytest>=7.0', 'pytest-cov>=4.0'],
    },
    python_requires='>=3.8',
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
    ],
    entry_points={
        'console_scripts': [
            'reduction-harness=ReductionEngine.cli:main',
        ],
    },
)
