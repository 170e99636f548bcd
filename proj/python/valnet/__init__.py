"""Uncertainty propagation in valuation networks.

    >>> import valnet
    >>> net = valnet.Network()
    >>> net.execute(open("scenarios/dress/probability.vn").read())
"""

from ._core import Network, calculi, check_axioms, format_fixed3, format_script

__all__ = ["Network", "calculi", "check_axioms", "format_fixed3", "format_script"]
