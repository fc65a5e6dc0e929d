""" Installation """

from setuptools import setup
import lmm_interp

with open("README.md", "r", encoding="UTF-8") as fh:
    long_description = fh.read()


setup(
    name="lmm-interp",
    version=lmm_interp.__version__,
    license=lmm_interp.__license__,
    author=lmm_interp.__author__,
    keywords=[
        "LIBOR market model",
        "interest rates",
        "interpolation",
        "Monte Carlo",
        "caplet",
        "quantitative finance",
    ],
    description="Arbitrage-free continuous tenor interpolation of the LIBOR market model",
    long_description_content_type = "text/markdown",
    long_description=long_description,
    classifiers=[
        "Development Status :: 2 - Pre-Alpha",
        "Intended Audience :: Developers",
        "Intended Audience :: Financial and Insurance Industry",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: European Union Public Licence 1.2 (EUPL 1.2)",
        "Topic :: Office/Business :: Financial",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Software Development :: Libraries",
    ],
    packages=[
        "lmm_interp",
        "lmm_interp.model",
        "lmm_interp.model.volatility",
        "lmm_interp.exception",
    ],
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.8",
        "pandas>=1.4",
    ],
    entry_points={
        "console_scripts": ["lmm_interp=lmm_interp.__main__:main"],
    },
)
