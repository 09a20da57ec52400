"""Drive the experiment runner as the ``nlw`` command would.

Runs an invariance ensemble, interrupts it halfway, resumes it, and shows the
summary checksum equals that of an uninterrupted run.  The same run from a
shell is ``nlw invariance --config demos/configs/invariance.json --out runs/inv``.
"""
import hashlib
import json
import tempfile
from pathlib import Path

from radial_nlw.runner import RunConfig, run

config = RunConfig.from_json((Path(__file__).parent / "configs" / "invariance.json").read_text())
with tempfile.TemporaryDirectory() as tmp:
    full, part = Path(tmp) / "full", Path(tmp) / "part"
    run(config, full)
    run(config, part, max_members=128)
    print("partial manifest:", json.loads((part / "manifest.json").read_text())["status"])
    run(config, part, resume=True)
    sha = [hashlib.sha256((d / "summary.csv").read_bytes()).hexdigest()[:16] for d in (full, part)]
    print("summary.csv sha256:", sha, "identical:", sha[0] == sha[1])
    print(json.dumps(json.loads((full / "report.json").read_text())["corrected_pvalues"]))
