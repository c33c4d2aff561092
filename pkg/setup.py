# pylint: disable = missing-module-docstring
import pathlib
import setuptools  # type: ignore

README = pathlib.Path(__file__).parent / "README.md"
setuptools.setup(
    description="Simulate local-information algorithms on preferential-attachment graphs.",
    entry_points={"console_scripts": ["netlocal=netlocal.cli:main"]},
    install_requires=["numpy>=1.26"],
    license="MIT",
    long_description=README.read_text(),
    long_description_content_type="text/markdown",
    name="netlocal",
    packages=["netlocal"],
    python_requires=">=3.11",
    version="0.1.0",
)
