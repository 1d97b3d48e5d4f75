from setuptools import setup, find_packages

setup_requires = [
]

install_requires = [
    "numpy>=1.24",
    "scipy>=1.10",
    "pydantic>=2.0",
    "tqdm",
]

extras_require = {
    "test": [
        "pytest>=7.0",
        "hypothesis>=6.0",
    ],
}

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    version='0.1.0',

    name='penalty_lab',
    description='Penalty-bidding mechanisms for allocating reservable resources to present-biased agents',
    long_description=long_description,
    long_description_content_type="text/markdown",

    packages=find_packages(where='src'),
    package_dir={'': 'src'},

    license='MIT',

    python_requires='>=3.10',
    setup_requires=setup_requires,
    install_requires=install_requires,
    extras_require=extras_require,
    entry_points={
        "console_scripts": [
            "penalty-lab=penalty_lab.cli:main",
        ],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent"
    ]
)
