"""Task planning for an agile Earth-observation satellite.

Modules: ``astro`` (orbit and pointing geometry), ``scenario`` (problem
instances and access windows), ``smdp`` (the decision process), ``solvers``
(five planners), ``validate`` (independent plan replay), ``bench``
(experiments and grid search) and ``cli``.
"""

__version__ = "0.1.0"
