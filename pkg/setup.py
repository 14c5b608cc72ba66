from setuptools import setup, find_packages

install_requires = []
with open("requirements/main.in", "r") as fp:
    for line in fp:
        line = line.strip()
        if line:
            install_requires.append(line)


setup(
    name="mdspm",
    version="1.0.0",
    packages=find_packages(exclude=["tests*"]),
    package_data={"mdspm": ["tables.json"]},
    entry_points={"console_scripts": ["mdspm = mdspm.cli:main"]},
    install_requires=install_requires,
    python_requires=">=3.9",
)
