"""arcgraphs – k-multiarc graphs on surfaces with marked points."""

__version__ = "0.1.0"
