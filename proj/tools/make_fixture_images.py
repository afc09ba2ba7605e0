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
"""Draws the small labeled fixture library used by the offline image provider."""
import json
import os
import sys

from PIL import Image, ImageDraw

FIXTURES = [
    # keyword, file, size, background, object colour, box
    ("dog", "dog.png", (320, 240), (90, 140, 200), (120, 80, 40), (110, 70, 210, 170)),
    ("cat", "cat.png", (300, 300), (230, 230, 210), (60, 60, 60), (100, 100, 200, 200)),
    ("tobacco", "tobacco.png", (360, 240), (30, 30, 30), (200, 170, 90), (40, 60, 140, 180)),
    ("monkey", "monkey.png", (300, 240), (70, 160, 90), (110, 70, 30), (120, 80, 180, 160)),
]


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "data/fixtures/images"
    os.makedirs(out, exist_ok=True)
    index = {}
    for keyword, name, size, bg, fg, box in FIXTURES:
        img = Image.new("RGB", size, bg)
        d = ImageDraw.Draw(img)
        d.ellipse(box, fill=fg)
        img.save(os.path.join(out, name), optimize=True)
        index[keyword] = [{"file": name, "box": list(box), "label": keyword}]
    with open(os.path.join(out, "index.json"), "w", encoding="utf-8") as f:
        json.dump(index, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
