#! /usr/bin/env python
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
import os.path

from setuptools import setup, find_packages

install_requires = [
  'networkx >= 2.7',
  'prettytable >= 0.7',
]

setup_dir = os.path.split(__file__)[0]
if setup_dir == '':
  setup_dir = '.';
base_dir = os.path.relpath(os.path.normpath(setup_dir), os.getcwd())
src_dir = os.path.normpath(os.path.join(base_dir, 'src'))

setup(
  name = 'mpg_solver',
  version = '1.0.0',
  packages = find_packages(src_dir, exclude=['mpg_solver_tests']),
  package_dir = {'': src_dir },
  zip_safe = True,
  python_requires = '>=3.8',

  install_requires = install_requires,

  description = 'Mean-payoff games with partial and limited observation',
  long_description = 'mpg_solver classifies, solves and simulates ' +
      'mean-payoff games where Eve only sees observations of the state.',
  license = 'Apache License 2.0',
  classifiers = [
        "Development Status :: 4 - Beta",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
  ],
  entry_points = { 'console_scripts': [ 'mpgs = mpg_shell.mpgs:main', ]}
)
