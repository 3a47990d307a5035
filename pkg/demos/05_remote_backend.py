"""Run the pipeline against a backend served by another process.

The wire protocol carries frames, masks (run-length encoded), and
embeddings as newline-delimited JSON; here the counterpart is the adapter
package's deterministic stub (`pip install -e adapter` first). Swapping in
real models is the same command with model ids instead of --stub.
"""

import shutil
import subprocess
import sys

from findtrack import PipelineConfig, generate, run_pipeline, scenario
from findtrack.backends import resolve_backend
from findtrack.metrics import evaluate_sequence

probe = subprocess.run(
    [sys.executable, "-c", "import findtrack_adapter"], capture_output=True
)
if probe.returncode != 0:
    sys.exit("the adapter package is not installed; run: pip install -e adapter")

selector = f"stdio:{sys.executable} -m findtrack_adapter --stub"
print(f"backend selector: {selector}")

scene = generate(scenario("static", seed=1))
segmenter, aligner = resolve_backend(selector)
print(f"handshake ok, embedding dimension {segmenter.embed_dim}")

config = PipelineConfig(backend=selector)
result = run_pipeline(scene.video, config, segmenter, aligner)
segmenter.close()

print(f"key frame: {result.identification.key_frame}")
for row in result.identification.diagnostics:
    print(f"  frame {row.frame_index:2d}: confidence={row.confidence:.2f} "
          f"alignment={row.alignment:+.3f} score={row.score:.3f}")

j, f, jf = evaluate_sequence(result.masks, scene.gt)
print(f"\nstub masks are a fixed centered square, so truth agreement is low "
      f"by design: J&F={jf:.3f}")
print("areas per frame:", [m.area for m in result.masks.masks[:6]], "...")
