import os
import sys

mod_dir = os.environ.get("ENTANGLER_PYMOD_DIR")
if mod_dir and mod_dir not in sys.path:
    sys.path.insert(0, mod_dir)
