"""Knowledge-graph engine for n-ary statement patterns."""

__version__ = "0.1.0"
