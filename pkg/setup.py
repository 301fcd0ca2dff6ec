# -*- coding: utf-8 -*-
from setuptools import setup

__license__ = 'GPLv3'

about = {}
with open('pathipy/version.py') as f:
    exec(f.read(), about)

setup(name='pathipy',
      version=about['__version__'],
      description='Simulation and analysis of path identity sources of OAM entangled photons',
      long_description=open('README.rst').read(),
      author='pathipy developers',
      license=__license__,
      classifiers=[
          'License :: OSI Approved :: GNU General Public License v3 (GPLv3)',
          'Programming Language :: Python :: 3.7',
          'Programming Language :: Python :: 3.8',
          'Programming Language :: Python :: 3.9',
          'Topic :: Scientific/Engineering :: Physics',
      ],
      keywords='quantum optics entanglement tomography orbital angular momentum',
      python_requires='>=3.7',
      install_requires=[
          'beautifultable~=1.0.0',
          'click>=7.1, <8.2',
          'numpy>=1.17',
          'scipy>=1.4',
      ],
      extras_require={
          'dev': [
              'pip',
              'pytest>4',
              'pytest-cov',
              'pre-commit',
              'yapf',
              'pylint',
              'twine',
          ],
          'docs': [
              'nbsphinx',
              'sphinx',
              'sphinx-autobuild',
          ],
      },
      packages=[
          'pathipy',
          'pathipy.cli',
      ],
      include_package_data=True,
      test_suite='test',
      entry_points={
          'console_scripts': ['pathi = pathipy.cli.main:pathi'],
      })
