"""Graph embeddings of the Heisenberg group and S^3 with prescribed
complex-tangent knots, plus an independent numerical verification layer."""

__version__ = "0.1.0"
