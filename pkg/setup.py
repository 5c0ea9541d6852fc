# coding: utf-8

from __future__ import with_statement, print_function, absolute_import

from setuptools import setup, find_packages

version = {}
with open('krivine/version.py', 'r') as fd:
    exec(fd.read(), version)

description = 'Classical realizability toolkit: the Krivine machine, forcing values and a realizer checker'
with open('README.md', 'r') as fd:
    long_description = fd.read()

setup(
    name='krivine-realizability',
    version=version['version'],
    description=description,
    long_description=long_description,
    long_description_content_type='text/markdown',
    author='LINE Corp.',
    author_email='dl_pypi@linecorp.com',
    license='Apache License 2.0',
    packages=find_packages(exclude=['test', 'test.*']),
    package_data={'krivine': ['data/realizers.corpus']},
    python_requires='>=3.7',
    install_requires=['cryptography', 'pyparsing>=3.1'],
    extras_require={
        'test': ['hypothesis'],
        'docs': ['sphinx', 'sphinx_rtd_theme', 'sphinxcontrib-versioning'],
    },
    entry_points={'console_scripts': ['krivine=krivine.cli:main']},
    classifiers=[
        "Development Status :: 3 - Alpha",
        "License :: OSI Approved :: Apache Software License",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.7",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Topic :: Scientific/Engineering :: Mathematics"
    ]
)
