"""8-bit grayscale images and PGM (P5) file I/O."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Image:
    """A row-major 8-bit grayscale image."""

    width: int
    height: int
    pixels: np.ndarray  # uint8, flat, length width * height

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"image dimensions must be positive, got {self.width}x{self.height}")
        pixels = np.asarray(self.pixels)
        if pixels.dtype != np.uint8:
            raise ValueError(f"pixels must be uint8, got {pixels.dtype}")
        pixels = np.ascontiguousarray(pixels.reshape(-1))
        if pixels.size != self.width * self.height:
            raise ValueError(
                f"pixel count {pixels.size} does not match {self.width}x{self.height}"
            )
        object.__setattr__(self, "pixels", pixels)

    @property
    def pixel_count(self) -> int:
        return self.pixels.size


def random_image(width: int, height: int, seed: int) -> Image:
    rng = np.random.default_rng(seed)
    return Image(width, height, rng.integers(0, 256, size=width * height, dtype=np.uint8))


def _next_token(fh) -> bytes:
    """Next whitespace-delimited PGM header token, skipping # comments."""
    token = b""
    while True:
        ch = fh.read(1)
        if not ch:
            if token:
                return token
            raise ValueError("unexpected end of PGM header")
        if ch == b"#":
            while ch and ch != b"\n":
                ch = fh.read(1)
            continue
        if ch.isspace():
            if token:
                return token
            continue
        token += ch


def read_pgm(path) -> Image:
    """Read a binary (P5) PGM file with maxval <= 255."""
    with open(path, "rb") as fh:
        magic = _next_token(fh)
        if magic != b"P5":
            raise ValueError(f"{path}: not a binary PGM (magic {magic!r}, expected P5)")
        width = int(_next_token(fh))
        height = int(_next_token(fh))
        maxval = int(_next_token(fh))
        if not 0 < maxval <= 255:
            raise ValueError(f"{path}: only 8-bit PGM supported, maxval {maxval}")
        data = fh.read(width * height)
        if len(data) != width * height:
            raise ValueError(f"{path}: truncated pixel data ({len(data)} of {width * height} bytes)")
    return Image(width, height, np.frombuffer(data, dtype=np.uint8))


def write_pgm(path, img: Image) -> None:
    with open(path, "wb") as fh:
        fh.write(f"P5\n{img.width} {img.height}\n255\n".encode("ascii"))
        fh.write(img.pixels.tobytes())
