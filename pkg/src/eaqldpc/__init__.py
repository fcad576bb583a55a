"""Entanglement-assisted quantum LDPC codes from combinatorial designs and
finite geometries: construction, exact parameter derivation over GF(2), and
sum-product Monte Carlo evaluation over the depolarizing channel."""

__version__ = "0.1.0"
