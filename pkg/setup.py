import os

from setuptools import setup, find_packages

with open(os.path.join(os.path.abspath(os.path.dirname(__file__)), 'README.md'), encoding='utf-8') as fh:
    long_description = '\n' + fh.read()

setup(
    name='py-tripartite',
    version='1.0.0',
    license='Apache-2.0',
    author='SecorD',
    description='Three-party quantum teleportation: fidelities, correction protocols and optimal co-sender bases',
    long_description_content_type='text/markdown',
    long_description=long_description,
    packages=find_packages(exclude=['tests']),
    install_requires=[
        'numpy', 'pretty-utils @ git+https://github.com/SecorD0/pretty-utils@main', 'pycryptodome'
    ],
    extras_require={
        'tests': ['pytest', 'hypothesis']
    },
    entry_points={
        'console_scripts': ['py-tripartite=py_tripartite.cli:main']
    },
    keywords=['quantum', 'teleportation', 'ghz', 'w state', 'fidelity', 'three qubit'],
    classifiers=[
        'Programming Language :: Python :: 3.8'
    ]
)
