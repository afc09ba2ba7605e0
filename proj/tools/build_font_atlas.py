#!/usr/bin/env python3
# Copyright 2026 The mmtox Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Rasterizes the bundled glyph atlases under data/fonts.

Usage:
  build_font_atlas.py --latin DejaVuSansMono.ttf --cjk-dir <dir of Noto Sans SC .woff> --out data/fonts

Each atlas is a grayscale PNG holding fixed-size cells in row-major order and
a sidecar text file listing one hexadecimal code point per cell.
"""
import argparse
import glob
import os

from fontTools.ttLib import TTFont
from PIL import Image, ImageDraw, ImageFont

COLUMNS = 64


def render_atlas(chars, fonts_for, cell_w, cell_h, em_px, out_png, out_idx):
    rows = (len(chars) + COLUMNS - 1) // COLUMNS
    atlas = Image.new("L", (COLUMNS * cell_w, rows * cell_h), 0)
    draw = ImageDraw.Draw(atlas)
    for i, ch in enumerate(chars):
        font = fonts_for(ch)
        col, row = i % COLUMNS, i // COLUMNS
        x0, y0 = col * cell_w, row * cell_h
        left, top, right, bottom = font.getbbox(ch)
        adv = font.getlength(ch)
        ascent, descent = font.getmetrics()
        ox = x0 + (cell_w - adv) / 2.0
        oy = y0 + (cell_h - (ascent + descent)) / 2.0
        draw.text((ox, oy), ch, fill=255, font=font)
    atlas.save(out_png, optimize=True)
    with open(out_idx, "w", encoding="utf-8") as f:
        f.write(f"{cell_w} {cell_h} {COLUMNS}\n")
        for ch in chars:
            f.write(f"{ord(ch):x}\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--latin", required=True)
    ap.add_argument("--cjk-dir", required=True)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)

    latin_chars = [chr(c) for c in range(0x20, 0x7F)]
    latin = ImageFont.truetype(args.latin, 39)
    render_atlas(latin_chars, lambda ch: latin, 24, 48, 39,
                 os.path.join(args.out, "latin.png"),
                 os.path.join(args.out, "latin.idx"))

    paths = sorted(glob.glob(os.path.join(args.cjk_dir, "*-400-normal.woff")))
    cmaps = []
    for p in paths:
        cmap = TTFont(p).getBestCmap() or {}
        cmaps.append((set(cmap.keys()), p))
    cache = {}

    def cjk_font(ch):
        for keys, p in cmaps:
            if ord(ch) in keys:
                if p not in cache:
                    cache[p] = ImageFont.truetype(p, 28)
                return cache[p]
        raise KeyError(ch)

    wanted = []
    for hi in range(0xB0, 0xD8):
        for lo in range(0xA1, 0xFF):
            try:
                wanted.append(bytes([hi, lo]).decode("gb2312"))
            except UnicodeDecodeError:
                pass
    wanted += list("，。！？：；、“”‘’（）《》【】…—·～")
    wanted += [chr(c) for c in range(0xFF01, 0xFF5F)]
    chars = []
    for ch in dict.fromkeys(wanted):
        try:
            cjk_font(ch)
            chars.append(ch)
        except KeyError:
            pass
    render_atlas(chars, cjk_font, 32, 32, 28,
                 os.path.join(args.out, "cjk.png"),
                 os.path.join(args.out, "cjk.idx"))


if __name__ == "__main__":
    main()
