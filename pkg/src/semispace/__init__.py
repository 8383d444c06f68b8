"""Space functions of finitely presented semigroups and the machine
constructions that realise them."""

__version__ = "0.1.0"
