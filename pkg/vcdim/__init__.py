# VC dimension estimation and model selection

__version__ = "1.0.0"
