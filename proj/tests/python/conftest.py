import os
import sys

stage = os.environ.get("BETADUAL_STAGE")
if stage:
    sys.meta_path[:] = [f for f in sys.meta_path if not type(f).__module__.startswith("_editable_skbc_betadual")]
    sys.path.insert(0, stage)
