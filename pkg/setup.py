from setuptools import setup, find_packages

setup(
    name="awtc",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "numpy>=1.24.0",
        "scipy>=1.10.0",
        "pydantic>=2.4.2",
        "python-dotenv>=1.0.0",
        "pydantic-settings>=2.0.0",
    ],
    package_data={"awtc": ["data/*.code"]},
    entry_points={"console_scripts": ["awtc=awtc.main:main"]},
)
