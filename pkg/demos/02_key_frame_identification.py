"""Key-frame selection under different score weightings.

The distractor scenario is built so that segmentation confidence alone is
misled (an occluder hides the target at one candidate frame while a
similarly colored companion stays visible) and alignment alone is misled
(a transient object matches the text prototype perfectly). The balanced
weighting survives both traps.
"""

import numpy as np

from findtrack import PipelineConfig, generate, identify_target, resolve_backend, scenario

segmenter, aligner = resolve_backend("builtin:color")
scene = generate(scenario("distractor", seed=0))
print(f"expression: {scene.expression!r}\n")

for w1, w2 in ((0.5, 0.5), (1.0, 0.0), (0.0, 1.0)):
    config = PipelineConfig(w1=w1, w2=w2)
    result = identify_target(scene.video, config, segmenter, aligner)
    print(f"weights w1={w1} w2={w2}  ->  key frame {result.key_frame}")
    print("  frame  confidence  alignment   score  empty")
    for row in result.diagnostics:
        marker = " <-- selected" if row.frame_index == result.key_frame else ""
        print(f"  {row.frame_index:5d}  {row.confidence:10.4f}  {row.alignment:9.4f}"
              f"  {row.score:6.4f}  {str(row.mask.is_empty()):5s}{marker}")
    gt = scene.gt.masks[result.key_frame - 1]
    inter = np.logical_and(result.key_mask.bits, gt.bits).sum()
    union = np.logical_or(result.key_mask.bits, gt.bits).sum()
    print(f"  key mask IoU vs truth at that frame: {inter / union if union else 1.0:.3f}\n")
