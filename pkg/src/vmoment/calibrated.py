"""Frozen envelope constants; regenerate with scripts/calibrate.py.

Each constant is an empirical maximum over the documented scan domain
times the stated safety margin.  Tests treat these as fixed.
"""

TRUNCATION_ENVELOPE_C = 29.340836983247627
TRUNCATION_ENVELOPE_ALT_C = 9.91555767703977
MEAN_SQUARE_ENVELOPE_C = 0.01932266492560334
GAP_SCALING_FLOOR_K3 = 0.29394051011117206
GAP_SCALING_FLOOR_K4 = 0.7665702881200153
COUNT_BOUND_C = 2.6519311592668644
GAP_SHAPE_FACTOR = 0.5
FIRST_MOMENT_ENVELOPE_C = 50.0
