"""Pretrained-model wrappers behind the protocol's model interface.

The wrappers hold any objects with the right call shapes, so tests can
inject fakes; the `load_*` builders pull real weights via transformers and
are only imported when a model id is actually requested. Alpha-style mask
conditioning is realized here as background suppression plus a bounding-box
crop before the image encoder, since plain CLIP-family encoders take no
alpha channel.
"""

from __future__ import annotations

import numpy as np

DEFAULT_SEGMENTER = "CIDAS/clipseg-rd64-refined"
DEFAULT_ALIGNER = "openai/clip-vit-base-patch32"
MASK_THRESHOLD = 0.4


class SegmenterModel:
    """Text-prompted segmentation; `infer` maps (rgb, text) -> float [0,1] map."""

    def __init__(self, infer):
        self._infer = infer

    def segment(self, rgb: np.ndarray, text: str):
        probability = np.asarray(self._infer(rgb, text), dtype=np.float64)
        if probability.shape != rgb.shape[:2]:
            raise ValueError(
                f"probability map {probability.shape} does not match frame {rgb.shape[:2]}"
            )
        bits = probability >= MASK_THRESHOLD
        # No predicted-IoU head is exposed, so report the mean foreground
        # probability inside the mask as the confidence surrogate.
        confidence = float(probability[bits].mean()) if bits.any() else float(probability.max())
        return bits, min(1.0, max(0.0, confidence))


class AlignerModel:
    """Region/text embeddings; callables map arrays/strings -> 1-D vectors."""

    def __init__(self, embed_dim: int, image_encoder, text_encoder):
        self.embed_dim = int(embed_dim)
        self._image_encoder = image_encoder
        self._text_encoder = text_encoder

    def embed_image(self, rgb: np.ndarray, mask: np.ndarray) -> np.ndarray:
        conditioned = masked_crop(rgb, mask)
        return np.asarray(self._image_encoder(conditioned), dtype=np.float64).ravel()

    def embed_text(self, text: str) -> np.ndarray:
        return np.asarray(self._text_encoder(text), dtype=np.float64).ravel()


def masked_crop(rgb: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Suppress background pixels and crop to the mask's bounding box."""
    if not mask.any():
        return rgb
    ys, xs = np.nonzero(mask)
    suppressed = np.where(mask[..., None], rgb, 0).astype(np.uint8)
    return suppressed[ys.min():ys.max() + 1, xs.min():xs.max() + 1]


def load_segmenter(model_id: str = DEFAULT_SEGMENTER, device: str = "cpu") -> SegmenterModel:
    import torch
    from transformers import CLIPSegForImageSegmentation, CLIPSegProcessor

    processor = CLIPSegProcessor.from_pretrained(model_id)
    model = CLIPSegForImageSegmentation.from_pretrained(model_id).to(device).eval()

    def infer(rgb, text):
        inputs = processor(text=[text], images=[rgb], return_tensors="pt").to(device)
        with torch.no_grad():
            logits = model(**inputs).logits
        prob = torch.sigmoid(logits)[0]
        prob = torch.nn.functional.interpolate(
            prob[None, None], size=rgb.shape[:2], mode="bilinear", align_corners=False
        )[0, 0]
        return prob.cpu().numpy()

    return SegmenterModel(infer)


def load_aligner(model_id: str = DEFAULT_ALIGNER, device: str = "cpu") -> AlignerModel:
    import torch
    from transformers import CLIPModel, CLIPProcessor

    processor = CLIPProcessor.from_pretrained(model_id)
    model = CLIPModel.from_pretrained(model_id).to(device).eval()

    def encode_image(rgb):
        inputs = processor(images=[rgb], return_tensors="pt").to(device)
        with torch.no_grad():
            return model.get_image_features(**inputs)[0].cpu().numpy()

    def encode_text(text):
        inputs = processor(text=[text], return_tensors="pt", padding=True).to(device)
        with torch.no_grad():
            return model.get_text_features(**inputs)[0].cpu().numpy()

    return AlignerModel(model.config.projection_dim, encode_image, encode_text)
