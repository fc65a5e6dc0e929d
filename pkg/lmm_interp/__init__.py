""" LMM Interp """

__copyright__ = "©2024"
__license__ = "European Union Public Licence 1.2 (EUPL 1.2)"
__software__ = "LMM Interp"
__author__ = "LMM Interp developers"
__version__ = "0.1.0"
