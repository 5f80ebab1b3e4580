"""Essential monomials, essential monoids and lowest-term valuations for
irreducible representations of semisimple Lie algebras, in exact arithmetic."""

__version__ = "0.1.0"
