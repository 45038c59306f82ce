"""Exact computations with modules over the algebra ``ab - ba = b^2``.

Modules: :mod:`series` (truncated power series), :mod:`abalg` (the algebra and
its substitution maps), :mod:`ximodel` (the log-power model Xi), :mod:`theme`
(invariants of themes), :mod:`changevar` (changes of variable), :mod:`dsl` and
:mod:`cli`.
"""

__version__ = "0.1.0"
