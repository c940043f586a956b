__author__ = 'Cliffbell Development Team'
__date__ = 'October, 19, 2026'
__version__ = '26.10'
