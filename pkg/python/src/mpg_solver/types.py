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

import fractions

__docformat__ = "epytext"

# Verdict tags.
EVE = 'eve'
ADAM = 'adam'
NEITHER = 'neither'
UNKNOWN = 'unknown'

VERDICT_TAGS = (EVE, ADAM, NEITHER, UNKNOWN)

class Attr(object):
  """
  Encapsulates information about an attribute in the JSON encoding of a
  result object: whether it's read-only.
  """

  def __init__(self, rw=True):
    self.rw = rw

  def to_json(self, value, preserve_ro):
    """
    Returns the JSON encoding of the given attribute value.

    If the value has a 'to_json_dict' method, that method is called. Otherwise:
     - fractions.Fraction: "p/q" string (or the integer if q is 1).
     - objects with a 'render' method (witnesses): the rendered string.
     - python list or tuple: list with the JSON encoding of the items.
     - the raw value otherwise.
    """
    if hasattr(value, 'to_json_dict'):
      return value.to_json_dict(preserve_ro)
    elif isinstance(value, fractions.Fraction):
      if value.denominator == 1:
        return value.numerator
      return str(value)
    elif hasattr(value, 'render'):
      return value.render()
    elif isinstance(value, (list, tuple)):
      return [ self.to_json(x, preserve_ro) for x in value ]
    else:
      return value

class ROAttr(Attr):
  """
  Subclass that just defines the attribute as read-only.
  """
  def __init__(self):
    Attr.__init__(self, rw=False)


class BaseSolverObject(object):
  """
  The BaseSolverObject helps with the JSON output of solver results.

  The derived class declares its attributes in the '_ATTRIBUTES' field. Read
  only attributes can be given to the constructor but not assigned afterwards.

  The derived class's constructor must call the base class's init() static
  method with keyword arguments only.
  """

  _ATTRIBUTES = { }
  _WHITELIST = ( '_attributes', )

  @classmethod
  def _get_attributes(cls):
    """
    Returns a map of property names to attr instances (or None for default
    attribute behavior) describing the properties of the object.
    """
    return cls._ATTRIBUTES

  @staticmethod
  def init(obj, attrs=None):
    """
    Wraper around the real constructor to avoid issues with the 'self'
    argument. Call like this, from a subclass's constructor:

     - BaseSolverObject.init(self, locals())
    """
    str_attrs = { }
    if attrs:
      for k, v in attrs.items():
        if k not in ('self', '__class__'):
          str_attrs[k] = v
    BaseSolverObject.__init__(obj, **str_attrs)

  def __init__(self, **attrs):
    """
    Initializes all known properties of the object to None, then sets the
    properties given in the provided attributes dictionary.

    @param attrs: optional dictionary of attributes to set.
    """
    for name in self._get_attributes():
      object.__setattr__(self, name, None)
    if attrs:
      for k, v in attrs.items():
        self._check_attr(k, True)
        object.__setattr__(self, k, v)

  def __setattr__(self, name, val):
    if name not in BaseSolverObject._WHITELIST:
      self._check_attr(name, False)
    object.__setattr__(self, name, val)

  def _check_attr(self, name, allow_ro):
    if name not in self._get_attributes():
      raise AttributeError('Invalid property %s for class %s.' %
          (name, self.__class__.__name__))
    attr = self._get_attributes()[name]
    if not allow_ro and attr and not attr.rw:
      raise AttributeError('Attribute %s of class %s is read only.' %
          (name, self.__class__.__name__))
    return attr

  def to_json_dict(self, preserve_ro=True):
    dic = { }
    for name, attr in self._get_attributes().items():
      if not preserve_ro and attr and not attr.rw:
        continue
      value = getattr(self, name, None)
      if value is not None:
        if attr:
          dic[name] = attr.to_json(value, preserve_ro)
        else:
          dic[name] = value
    return dic

  def __str__(self):
    """
    Default implementation of __str__. Uses the type name and the first
    attribute retrieved from the attribute map to create the string.
    """
    name = list(self._get_attributes())[0]
    value = getattr(self, name, None)
    return "<%s>: %s = %s" % (self.__class__.__name__, name, value)

#
# Solver results.
#

class Verdict(BaseSolverObject):
  """
  Three-valued outcome of a solver.

  The witness is a StrategyTree for 'eve' and 'adam' verdicts and the dead or
  truncated PlayNode for 'neither' and 'unknown' verdicts. 'inconclusive' is
  set when the verdict only holds under an unchecked precondition.
  """
  _ATTRIBUTES = {
    'tag'           : ROAttr(),
    'method'        : ROAttr(),
    'witness'       : ROAttr(),
    'inconclusive'  : ROAttr(),
  }

  def __init__(self, tag=None, method=None, witness=None, inconclusive=False):
    BaseSolverObject.init(self, locals())

  def __str__(self):
    res = "<Verdict>: %s (%s)" % (self.tag, self.method)
    if self.inconclusive:
      res += " inconclusive"
    return res

  @property
  def winner(self):
    """The winning player, or None if nobody wins conclusively."""
    if self.tag in (EVE, ADAM) and not self.inconclusive:
      return self.tag
    return None


class Classification(BaseSolverObject):
  """
  Class-membership report of a game, as produced by classifier.classify().
  The 'belief' flag is set when the predicates were evaluated on the belief
  game of a partial-observation input.
  """
  _ATTRIBUTES = {
    'game'            : ROAttr(),
    'limited'         : ROAttr(),
    'belief'          : ROAttr(),
    'visible_weights' : ROAttr(),
    'fac'             : ROAttr(),
    'fac_witness'     : ROAttr(),
    'forcibly_fac'    : ROAttr(),
    'verdict'         : ROAttr(),
    'terminating'     : ROAttr(),
    'depth'           : ROAttr(),
  }

  def __init__(self, game=None, limited=None, belief=None,
      visible_weights=None, fac=None, fac_witness=None, forcibly_fac=None,
      verdict=None, terminating=None, depth=None):
    BaseSolverObject.init(self, locals())


class SafetyResult(BaseSolverObject):
  """
  Outcome of the clamped-value safety game. The positional strategy on
  clamped functions is kept in the 'strategy' property and not serialized.
  """
  _ATTRIBUTES = {
    'winner'        : ROAttr(),
    'inconclusive'  : ROAttr(),
    'cap'           : ROAttr(),
    'arena_size'    : ROAttr(),
    'attractor_size': ROAttr(),
  }

  def __init__(self, winner=None, inconclusive=False, cap=None,
      arena_size=None, attractor_size=None, strategy=None, initial=None,
      successor=None):
    BaseSolverObject.init(self, dict(winner=winner, inconclusive=inconclusive,
        cap=cap, arena_size=arena_size, attractor_size=attractor_size))
    # Bypass checks in BaseSolverObject.__setattr__
    object.__setattr__(self, 'strategy', strategy or { })
    object.__setattr__(self, 'initial', initial)
    object.__setattr__(self, 'successor', successor)

  def __str__(self):
    res = "<SafetyResult>: %s (arena %s)" % (self.winner, self.arena_size)
    if self.inconclusive:
      res += " inconclusive"
    return res


class TraceStep(BaseSolverObject):
  """One step of a simulated play."""
  _ATTRIBUTES = {
    'step'        : ROAttr(),
    'action'      : ROAttr(),
    'observation' : ROAttr(),
    'function'    : ROAttr(),
    'min'         : ROAttr(),
    'max'         : ROAttr(),
    'mean'        : ROAttr(),
    'reset'       : ROAttr(),
  }

  def __init__(self, step=None, action=None, observation=None, function=None,
      min=None, max=None, mean=None, reset=None):
    BaseSolverObject.init(self, locals())


class Trace(BaseSolverObject):
  """
  A simulated play prefix. The tracked weight functions themselves are kept
  in the 'functions' property, aligned with 'steps'.
  """
  _ATTRIBUTES = {
    'game'    : ROAttr(),
    'horizon' : ROAttr(),
    'resets'  : ROAttr(),
    'steps'   : ROAttr(),
  }

  def __init__(self, game=None, horizon=None, resets=None, steps=None,
      functions=None):
    BaseSolverObject.init(self, dict(game=game, horizon=horizon,
        resets=resets, steps=steps))
    object.__setattr__(self, 'functions', functions or [ ])

  @property
  def min_value(self):
    """Least tracked value over the whole trace."""
    return min(s.min for s in self.steps)

  @property
  def final_mean(self):
    """Mean of the least concrete prefix weight at the last step."""
    return self.steps[-1].mean

  def to_tsv(self):
    lines = [ "\t".join(("step", "action", "observation", "function", "min",
        "mean")) ]
    for s in self.steps:
      lines.append("\t".join((str(s.step), s.action, s.observation,
          s.function, str(s.min), str(s.mean))))
    return "\n".join(lines) + "\n"
