"""Classification and K-theory of boundary quotients of right-angled Artin group Toeplitz algebras."""

__version__ = "0.1.0"
