# Default linguistic labels, weakest first.
LABEL_NAMES = ("a", "b", "c", "d", "e")
LABEL_DESCRIPTIONS = ("negligible", "low", "intermediate", "high", "complete")

# Steps of the analogical reasoning process. Representation of the target
# problem is folded into search-retrieval.
STEP_NAMES = ("search-retrieval", "mapping", "adaptation")

# Places after the decimal point used by human readable reports.
DECIMALS = 3

# Largest difference between a computed and a printed value that is still
# explained by rounding.
TOLERANCE = "0.01"

# Environment variable enabling debug output.
DEBUG_VARIABLE = "FUZZAR_DEBUG"
