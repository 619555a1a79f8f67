"""Grayscale images, Netpbm PGM I/O and the classical dark-pixel scan."""
from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ImageIOError, InvalidArgumentError, InvalidImageError, ParseError

__all__ = [
    "GrayImage",
    "ThresholdConfig",
    "DarkPixel",
    "classical_scan",
    "load_pgm",
    "save_pgm",
    "parse_pgm",
    "format_pgm",
]

MAXVAL = 255


def _is_power_of_two(v: int) -> bool:
    return v > 0 and v & (v - 1) == 0


@dataclass(frozen=True)
class GrayImage:
    """Square, power-of-two grid of 8-bit intensities stored row-major.

    ``pixel(x, y)`` reads column ``x`` of row ``y``; 0 is black, 255 white.
    """

    side: int
    pixels: tuple[int, ...]

    def __post_init__(self):
        pixels = tuple(int(v) for v in self.pixels)
        object.__setattr__(self, "pixels", pixels)
        if self.side < 2 or not _is_power_of_two(self.side):
            raise InvalidImageError(f"side must be a power of two >= 2, got {self.side}")
        if len(pixels) != self.side * self.side:
            raise InvalidImageError(
                f"{self.side}x{self.side} image needs {self.side ** 2} pixels, got {len(pixels)}"
            )
        bad = [v for v in pixels if not 0 <= v <= MAXVAL]
        if bad:
            raise InvalidImageError(f"intensities must be in 0..255, got {bad[0]}")

    @classmethod
    def from_pixels(cls, pixels: Sequence[int]) -> "GrayImage":
        """Build from a flat row-major sequence whose length is a square."""
        pixels = list(pixels)
        side = int(round(len(pixels) ** 0.5))
        if side * side != len(pixels):
            raise InvalidImageError(f"{len(pixels)} pixels do not form a square image")
        return cls(side, tuple(pixels))

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> "GrayImage":
        rows = [list(r) for r in rows]
        if any(len(r) != len(rows) for r in rows):
            raise InvalidImageError("image must be square")
        return cls(len(rows), tuple(v for r in rows for v in r))

    @property
    def n(self) -> int:
        """Position bits per axis: ``side == 2**n``."""
        return self.side.bit_length() - 1

    def pixel(self, x: int, y: int) -> int:
        return self.pixels[y * self.side + x]

    def rows(self) -> list[list[int]]:
        s = self.side
        return [list(self.pixels[r * s:(r + 1) * s]) for r in range(s)]


@dataclass(frozen=True)
class ThresholdConfig:
    """A pixel is dark iff its intensity is strictly below ``threshold``."""

    threshold: int = 100

    def __post_init__(self):
        if not 0 <= self.threshold <= 256:
            raise InvalidArgumentError(f"threshold must be in 0..256, got {self.threshold}")

    def is_dark(self, intensity: int) -> bool:
        return intensity < self.threshold


@dataclass(frozen=True, order=True)
class DarkPixel:
    x: int
    y: int
    intensity: int


def classical_scan(image: GrayImage, config: ThresholdConfig) -> list[DarkPixel]:
    """Every dark pixel, row-major. Ground truth for all quantum modes."""
    s = image.side
    return [
        DarkPixel(i % s, i // s, v)
        for i, v in enumerate(image.pixels)
        if config.is_dark(v)
    ]


_HEADER_TOKEN = re.compile(rb"\s*(?:#[^\n]*(?:\n|$)\s*)*([^\s#]+)")


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    tokens, pos = [], 0
    for _ in range(count):
        m = _HEADER_TOKEN.match(data, pos)
        if not m:
            raise ParseError("truncated PGM header")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens, pos


def parse_pgm(data: bytes) -> GrayImage:
    """Decode a P2 (plain) or P5 (raw) PGM with maxval 255."""
    tokens, pos = _header_tokens(data, 4)
    magic = tokens[0]
    if magic not in (b"P2", b"P5"):
        raise ParseError(f"not a grayscale PGM (magic {magic!r})")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise ParseError(f"non-numeric PGM header field: {exc}") from exc
    if width <= 0 or height <= 0:
        raise ParseError(f"bad PGM dimensions {width}x{height}")
    if maxval != MAXVAL:
        raise ParseError(f"only maxval 255 is supported, got {maxval}")
    count = width * height

    if magic == b"P5":
        # Exactly one whitespace byte separates maxval from the raster.
        if pos >= len(data) or not data[pos:pos + 1].isspace():
            raise ParseError("missing whitespace before P5 raster")
        raster = data[pos + 1:]
        if len(raster) < count:
            raise ParseError(f"P5 raster holds {len(raster)} bytes, expected {count}")
        pixels = list(raster[:count])
    else:
        body = re.sub(rb"#[^\n]*", b"", data[pos:]).split()
        if len(body) != count:
            raise ParseError(f"P2 raster holds {len(body)} values, expected {count}")
        try:
            pixels = [int(t) for t in body]
        except ValueError as exc:
            raise ParseError(f"non-numeric P2 sample: {exc}") from exc
        if any(not 0 <= v <= maxval for v in pixels):
            raise ParseError("P2 sample outside 0..maxval")

    if width != height:
        raise InvalidImageError(f"image must be square, got {width}x{height}")
    return GrayImage(width, tuple(pixels))


def format_pgm(image: GrayImage, binary: bool = False) -> bytes:
    header = f"{'P5' if binary else 'P2'}\n{image.side} {image.side}\n{MAXVAL}\n".encode()
    if binary:
        return header + bytes(image.pixels)
    lines = (" ".join(str(v) for v in row) for row in image.rows())
    return header + ("\n".join(lines) + "\n").encode()


def load_pgm(path: str | os.PathLike) -> GrayImage:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise ImageIOError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_pgm(data)


def save_pgm(image: GrayImage, path: str | os.PathLike, binary: bool = False) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(format_pgm(image, binary))
    except OSError as exc:
        raise ImageIOError(f"cannot write {path}: {exc.strerror or exc}") from exc
