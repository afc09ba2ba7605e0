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
"""Writes the synthetic demo corpora under data/sample.

The corpora are built from fictional group names and mild vocabulary so the
offline pipeline has something to mine. Filler words are drawn from the
bundled stopword lists so that the slot vocabulary dominates TF-IDF.
"""
import os
import random
import sys

DOCS = 300

EN = {
    "hate": (
        ["martians", "goblins", "trolls", "zombies", "pirates",
         "ninjas", "clowns", "vampires", "robots", "wizards"],
        ["stupid", "lazy", "dumb", "useless", "greedy",
         "rude", "smelly", "ugly", "filthy", "criminals"],
        ["{a} are {b}", "all {a} are so {b}", "those {a} are {b}",
         "{a} are always {b}", "why are {a} so {b}", "{a} are very {b} indeed"],
    ),
    "pornography": (
        ["touch", "kiss", "lick", "rub", "squeeze",
         "stroke", "grab", "bite", "tickle", "caress"],
        ["neck", "lips", "thighs", "chest", "waist",
         "ears", "hips", "belly", "shoulders", "feet"],
        ["i will {a} your {b}", "{a} your {b} now", "can i {a} your {b}",
         "i would {a} your {b} again", "{a} my {b} please"],
    ),
    "advertisement": (
        ["tobacco", "alcohol", "pills", "loans", "watches",
         "perfume", "casino", "tickets", "crypto", "vapes"],
        None,
        ["{a} here tel: {tel}", "get {a} now whatsapp: {tel}",
         "{a} for you email: {mail}", "{a} ins: {ins}", "{a} call tel: {tel}"],
    ),
}

ZH = {
    "hate": (
        ["海盗", "僵尸", "小丑", "忍者", "巨魔", "妖精", "怪兽", "精灵", "矮人", "巫师"],
        ["愚蠢", "懒惰", "肮脏", "无能", "废物", "蠢货", "粗鲁", "贪婪", "丑陋", "垃圾"],
        ["{a} 都是 {b}", "那些 {a} 真是 {b}", "{a} 太 {b} 了", "这些 {a} 非常 {b}"],
    ),
    "pornography": (
        ["抚摸", "亲吻", "舔舐", "揉捏", "抱紧", "咬住", "抓住", "轻抚", "按摩", "挑逗"],
        ["脖子", "嘴唇", "大腿", "胸口", "腰部", "耳朵", "后背", "臀部", "肚子", "肩膀"],
        ["我 要 {a} 你的 {b}", "让 我 {a} 你的 {b}", "我 想 {a} 你的 {b} 吧"],
    ),
    "advertisement": (
        ["香烟", "白酒", "药品", "贷款", "手表", "香水", "赌场", "门票", "彩票", "烟草"],
        None,
        ["{a} 优惠 Tel: {tel}", "{a} 联系 WhatsApp: {tel}",
         "{a} 购买 Email: {mail}", "{a} 关注 Ins: {ins}"],
    ),
}


def contact(rng):
    return {
        "tel": "".join(rng.choice("0123456789") for _ in range(8)),
        "mail": "shop%d@mail.example" % rng.randrange(1000),
        "ins": "@deal%d" % rng.randrange(1000),
    }


def write(out_dir, lang, table, seed):
    os.makedirs(os.path.join(out_dir, lang), exist_ok=True)
    for category, (slot_a, slot_b, templates) in table.items():
        rng = random.Random("%s/%s/%d" % (lang, category, seed))
        lines = []
        for _ in range(DOCS):
            fields = {"a": rng.choice(slot_a)}
            if slot_b:
                fields["b"] = rng.choice(slot_b)
            fields.update(contact(rng))
            lines.append(rng.choice(templates).format(**fields))
        path = os.path.join(out_dir, lang, category + ".txt")
        with open(path, "w", encoding="utf-8") as f:
            f.write("\n".join(lines) + "\n")


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "data/sample"
    write(out, "en", EN, 7)
    write(out, "zh", ZH, 7)


if __name__ == "__main__":
    main()
