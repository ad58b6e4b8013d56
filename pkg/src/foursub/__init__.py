"""foursub: exact linear algebra for four-subspace configurations.

Subpackages cover exact prime-field/rational arithmetic, quiver
representations with Krull-Schmidt decomposition, linear relations, the six
embedding constructions into the four-subspace category, canonical
indecomposable families, a brute-force census, and a CLI.
"""

__version__ = "0.1.0"
