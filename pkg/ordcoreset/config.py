import os

from dotenv import load_dotenv

load_dotenv()


class Config:
    # Multiplier on both split thresholds (cumulative-error and length)
    SLACK = float(os.environ.get("ORDCORESET_SLACK", "1.0"))

    # Refuse projections that would create more lines than this
    MAX_LINES = int(os.environ.get("ORDCORESET_MAX_LINES", "1000000"))

    # exact_center_1d enumerates candidates up to this n, golden-section above
    EXACT_1D_LIMIT = int(os.environ.get("ORDCORESET_EXACT_1D_LIMIT", "2000"))

    # Sampling heuristic and evaluation protocol defaults
    NUM_SAMPLES = int(os.environ.get("ORDCORESET_NUM_SAMPLES", "30"))
    EVAL_CENTERS = int(os.environ.get("ORDCORESET_EVAL_CENTERS", "100"))

    # Each timed section is repeated and the median reported
    TIMING_REPEATS = int(os.environ.get("ORDCORESET_TIMING_REPEATS", "3"))

    LOG_LEVEL = os.environ.get("ORDCORESET_LOG_LEVEL", "INFO").upper()
