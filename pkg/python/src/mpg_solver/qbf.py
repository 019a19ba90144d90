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

"""
Prenex CNF quantified boolean formulas.

File format, one statement per line, '#' starts a comment:

  forall x1 x2
  exists y1
  clause x1 -y1
  clause -x1 y1

All quantifier lines come before the clauses. '-' negates a literal.
"""

import logging

from mpg_solver.errors import QbfFormatException

__docformat__ = "epytext"

LOG = logging.getLogger(__name__)

FORALL = 'forall'
EXISTS = 'exists'


class Qbf(object):
  """
  A closed prenex CNF formula. 'prefix' lists (quantifier, variable) pairs in
  quantifier order, 'clauses' lists tuples of (variable, positive) literals.
  """

  def __init__(self, prefix, clauses):
    self.prefix = tuple(prefix)
    self.clauses = tuple(tuple(c) for c in clauses)
    self._quantifier = dict((v, q) for q, v in self.prefix)

  def __eq__(self, other):
    return isinstance(other, Qbf) and self.prefix == other.prefix and \
        self.clauses == other.clauses

  def __ne__(self, other):
    return not self.__eq__(other)

  def __hash__(self):
    return hash((self.prefix, self.clauses))

  def __repr__(self):
    return "<Qbf>: %s" % (self.render(),)

  @property
  def variables(self):
    return [ v for q, v in self.prefix ]

  def quantifier(self, var):
    return self._quantifier[var]

  def index(self, var):
    return self.variables.index(var)

  def render(self):
    quants = " ".join("%s %s" % (q, v) for q, v in self.prefix)
    clauses = " & ".join("(%s)" % (" | ".join(
        v if pos else "-" + v for v, pos in c),) for c in self.clauses)
    return "%s: %s" % (quants, clauses)


def _literal(token, lineno):
  neg = token.startswith('-')
  var = token[1:] if neg else token
  if not var:
    raise QbfFormatException("Empty literal", lineno)
  return var, not neg

def load_qbf(text):
  """
  Parses a formula.

  @raise QbfFormatException: with the offending line number.
  """
  prefix = [ ]
  quantified = set()
  clauses = [ ]
  for lineno, raw in enumerate(text.splitlines(), 1):
    line = raw.split('#', 1)[0].strip()
    if not line:
      continue
    tokens = line.split()
    keyword = tokens[0]
    if keyword in (FORALL, EXISTS):
      if clauses:
        raise QbfFormatException("Quantifier after a clause", lineno)
      if len(tokens) < 2:
        raise QbfFormatException("Quantifier without variables", lineno)
      for var in tokens[1:]:
        if var.startswith('-'):
          raise QbfFormatException("Invalid variable name %s" % (var,), lineno)
        if var in quantified:
          raise QbfFormatException("Variable %s quantified twice" % (var,),
              lineno)
        quantified.add(var)
        prefix.append((keyword, var))
    elif keyword == 'clause':
      if len(tokens) < 2:
        raise QbfFormatException("Empty clause", lineno)
      clause = [ ]
      for token in tokens[1:]:
        var, pos = _literal(token, lineno)
        if var not in quantified:
          raise QbfFormatException("Unquantified variable %s" % (var,), lineno)
        clause.append((var, pos))
      clauses.append(clause)
    else:
      raise QbfFormatException("Unknown statement %s" % (keyword,), lineno)
  if not clauses:
    raise QbfFormatException("Formula has no clauses", None)
  phi = Qbf(prefix, clauses)
  LOG.debug("Loaded QBF with %d variables and %d clauses", len(prefix),
      len(clauses))
  return phi

def _satisfied(phi, assignment):
  return all(any(assignment[v] == pos for v, pos in c) for c in phi.clauses)

def qbf_is_true(phi):
  """Truth value by expansion of the quantifier prefix."""
  def evaluate(i, assignment):
    if i == len(phi.prefix):
      return _satisfied(phi, assignment)
    q, v = phi.prefix[i]
    results = [ ]
    for value in (False, True):
      assignment[v] = value
      results.append(evaluate(i + 1, assignment))
    del assignment[v]
    return all(results) if q == FORALL else any(results)
  return evaluate(0, { })
