#!/usr/bin/env python3
# Copyright 2026 The UnionST Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the bundled data/ assets.

Produces:
  data/fonts/         DejaVu faces copied from the system install + license
  data/testfonts/     synthetic fonts exercising edge cases in the catalog
  data/backgrounds/   procedural background images
  data/colormap.txt   64-entry background-mean -> foreground-color table
  data/words.txt      small bundled word list
  data/phrases.txt    short multi-word phrases
  data/source.txt     free text used for substring sampling

Requires: fonttools, numpy, Pillow.  Deterministic (fixed seeds throughout).
"""

import os
import shutil
import struct
import sys

import numpy as np
from PIL import Image
from fontTools.ttLib import TTFont
from fontTools.subset import Subsetter, Options

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA = os.path.join(ROOT, "data")

DEJAVU_DIRS = [
    "/usr/share/fonts/truetype/dejavu",
    "/usr/local/lib/python3.10/dist-packages/matplotlib/mpl-data/fonts/ttf",
]
DEJAVU_FACES = [
    "DejaVuSans.ttf",
    "DejaVuSans-Bold.ttf",
    "DejaVuSans-Oblique.ttf",
    "DejaVuSans-BoldOblique.ttf",
    "DejaVuSerif.ttf",
    "DejaVuSerif-Bold.ttf",
    "DejaVuSerif-Italic.ttf",
    "DejaVuSansMono.ttf",
    "DejaVuSansMono-Bold.ttf",
    "DejaVuSansMono-Oblique.ttf",
]


def find_face(name):
    for d in DEJAVU_DIRS:
        p = os.path.join(d, name)
        if os.path.exists(p):
            return p
    raise FileNotFoundError(name)


def copy_fonts():
    out = os.path.join(DATA, "fonts")
    os.makedirs(out, exist_ok=True)
    for name in DEJAVU_FACES:
        shutil.copyfile(find_face(name), os.path.join(out, name))
    license_src = "/usr/share/doc/fonts-dejavu-core/copyright"
    if os.path.exists(license_src):
        shutil.copyfile(license_src, os.path.join(out, "LICENSE-DejaVu.txt"))
    print(f"fonts: {len(DEJAVU_FACES)} faces")


def make_testfonts():
    out = os.path.join(DATA, "testfonts")
    os.makedirs(out, exist_ok=True)
    src = find_face("DejaVuSans.ttf")

    # smallcaps.ttf: lowercase codepoints mapped to the uppercase glyphs, so
    # 'a' and 'A' render identically.  Subset to A-Za-z0-9 + space to keep it
    # small, then rewrite the cmap.
    font = TTFont(src)
    opts = Options()
    opts.layout_features = []
    opts.hinting = False
    opts.drop_tables += ["GSUB", "GPOS", "GDEF"]
    keep = [ord(c) for c in
            "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789 "]
    sub = Subsetter(options=opts)
    sub.populate(unicodes=keep)
    sub.subset(font)
    cmap = font.getBestCmap()
    for table in font["cmap"].tables:
        if not table.isUnicode():
            continue
        for lc in range(ord("a"), ord("z") + 1):
            uc = lc - 32
            if uc in cmap and lc in table.cmap:
                table.cmap[lc] = cmap[uc]
    font.save(os.path.join(out, "smallcaps.ttf"))

    # digits.ttf: digits only, no letters at all.
    font = TTFont(src)
    sub = Subsetter(options=opts)
    sub.populate(unicodes=[ord(c) for c in "0123456789"])
    sub.subset(font)
    font.save(os.path.join(out, "digits.ttf"))

    # pair.ttc: two-face collection; loaders take the first face (digits).
    from fontTools.ttLib import TTCollection
    coll = TTCollection()
    coll.fonts = [TTFont(os.path.join(out, "digits.ttf")),
                  TTFont(os.path.join(out, "smallcaps.ttf"))]
    coll.save(os.path.join(out, "pair.ttc"))

    # corrupt.ttf: a truncated copy that no parser should accept.
    with open(src, "rb") as f:
        blob = f.read(256)
    with open(os.path.join(out, "corrupt.ttf"), "wb") as f:
        f.write(blob)

    # notfont.txt: wrong extension sibling; the indexer must skip it.
    with open(os.path.join(out, "notfont.txt"), "w") as f:
        f.write("not a font\n")
    print("testfonts: smallcaps, digits, corrupt, notfont")


def value_noise(rng, w, h, cell, lo, hi):
    gw, gh = w // cell + 2, h // cell + 2
    grid = rng.uniform(lo, hi, size=(gh, gw))
    ys = np.arange(h) / cell
    xs = np.arange(w) / cell
    y0 = ys.astype(int)
    x0 = xs.astype(int)
    fy = (ys - y0)[:, None]
    fx = (xs - x0)[None, :]
    fy = fy * fy * (3 - 2 * fy)
    fx = fx * fx * (3 - 2 * fx)
    a = grid[np.ix_(y0, x0)]
    b = grid[np.ix_(y0, x0 + 1)]
    c = grid[np.ix_(y0 + 1, x0)]
    d = grid[np.ix_(y0 + 1, x0 + 1)]
    return a * (1 - fx) * (1 - fy) + b * fx * (1 - fy) + c * (1 - fx) * fy + d * fx * fy


def make_backgrounds():
    out = os.path.join(DATA, "backgrounds")
    os.makedirs(out, exist_ok=True)
    rng = np.random.default_rng(20260815)
    specs = []

    def save(name, arr):
        arr = np.clip(arr, 0, 255).astype(np.uint8)
        Image.fromarray(arr, "RGB").save(os.path.join(out, name))
        specs.append(name)

    def gradient(w, h, c0, c1, axis):
        t = np.linspace(0, 1, h if axis == 0 else w)
        t = t[:, None] if axis == 0 else t[None, :]
        img = np.zeros((h, w, 3))
        for k in range(3):
            img[..., k] = c0[k] * (1 - t) + c1[k] * t
        return img

    # Smooth gradients (sky, wall, sunset-ish).
    save("grad_sky.png", gradient(800, 600, (86, 138, 205), (196, 220, 240), 0))
    save("grad_wall.png", gradient(640, 480, (222, 218, 210), (186, 180, 168), 0))
    save("grad_dusk.png", gradient(800, 500, (240, 160, 96), (70, 56, 104), 0))
    save("grad_slate.png", gradient(720, 540, (40, 44, 52), (88, 96, 110), 1))

    # Textured surfaces from multi-octave value noise.
    for name, base, amp, cells, size in [
        ("tex_paper.png", (232, 228, 218), 14, (52, 13), (768, 512)),
        ("tex_concrete.png", (150, 150, 152), 26, (64, 9), (800, 600)),
        ("tex_sand.png", (206, 184, 144), 20, (40, 7), (700, 500)),
        ("tex_night.png", (24, 28, 40), 16, (80, 17), (800, 512)),
        ("tex_grass.png", (78, 120, 64), 24, (32, 5), (720, 480)),
    ]:
        w, h = size
        img = np.zeros((h, w, 3))
        n = value_noise(rng, w, h, cells[0], -1, 1) + 0.5 * value_noise(
            rng, w, h, cells[1], -1, 1)
        for k in range(3):
            img[..., k] = base[k] + amp * n + rng.normal(0, 2.0, (h, w))
        save(name, img)

    # Wood planks: horizontal bands + streak noise.
    w, h = 820, 560
    y = np.arange(h)[:, None]
    band = ((y // 70) % 2) * 12.0
    streak = value_noise(rng, w, h, 90, -1, 1) * 18 + value_noise(rng, w, h, 11, -1, 1) * 7
    img = np.zeros((h, w, 3))
    for k, base in enumerate((146, 102, 64)):
        img[..., k] = base + band + streak
    save("wood_planks.png", img)

    # Brick-ish checker of warm tones.
    w, h = 760, 520
    yy, xx = np.mgrid[0:h, 0:w]
    row = yy // 40
    col = (xx + (row % 2) * 40) // 80
    tone = ((row + col) % 3) * 12.0
    mortar = ((yy % 40 < 3) | ((xx + (row % 2) * 40) % 80 < 3)) * 40.0
    img = np.zeros((h, w, 3))
    for k, base in enumerate((152, 84, 66)):
        img[..., k] = base + tone - mortar + rng.normal(0, 3.0, (h, w))
    save("brick_wall.png", img)

    # Small and extreme-tone images (pipeline edge cases).
    save("small_mint.png", np.full((96, 128, 3), (196, 230, 210)) +
         rng.normal(0, 2.0, (96, 128, 3)))
    save("flat_white.png", np.full((400, 600, 3), 247.0))
    save("flat_black.png", np.full((400, 600, 3), 9.0))
    print(f"backgrounds: {len(specs)} images")
    return [os.path.join(out, s) for s in specs]


def make_colormap(bg_paths):
    # Cluster random background patch means, then derive two contrasting
    # foreground colors per cluster (one light, one dark, hue-shifted).
    rng = np.random.default_rng(7)
    means = []
    for p in bg_paths:
        img = np.asarray(Image.open(p).convert("RGB"), dtype=np.float64)
        h, w = img.shape[:2]
        for _ in range(160):
            ph = rng.integers(16, max(17, h // 2))
            pw = rng.integers(16, max(17, w // 2))
            y = rng.integers(0, h - ph + 1)
            x = rng.integers(0, w - pw + 1)
            means.append(img[y:y + ph, x:x + pw].mean(axis=(0, 1)))
    means = np.array(means)

    k = 64
    centers = means[rng.choice(len(means), k, replace=False)]
    for _ in range(25):
        d = ((means[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        lab = d.argmin(axis=1)
        for j in range(k):
            sel = means[lab == j]
            if len(sel):
                centers[j] = sel.mean(axis=0)
    # Flat backgrounds collapse many clusters onto one center; dedupe and
    # backfill from a coarse RGB lattice so the table keeps 64 usable rows.
    uniq = []
    for c in centers:
        if all(np.linalg.norm(c - u) > 6 for u in uniq):
            uniq.append(c)
    lattice = [np.array([r, g, b], dtype=np.float64)
               for r in (32, 96, 160, 224)
               for g in (32, 96, 160, 224)
               for b in (32, 96, 160, 224)]
    for c in lattice:
        if len(uniq) >= k:
            break
        if all(np.linalg.norm(c - u) > 6 for u in uniq):
            uniq.append(c)
    centers = np.array(uniq[:k])
    order = np.lexsort((centers[:, 2], centers[:, 1], centers[:, 0]))
    centers = centers[order]

    lines = []
    for c in centers:
        lum = 0.299 * c[0] + 0.587 * c[1] + 0.114 * c[2]
        if lum > 127:
            fg1 = np.clip(c - 150, 0, 60)
            fg2 = np.clip(c * 0.25 + np.array([60, 10, 10]), 0, 110)
        else:
            fg1 = np.clip(c + 150, 200, 255)
            fg2 = np.clip(c * 0.5 + np.array([150, 170, 120]), 120, 255)
        bg = ",".join(str(int(round(v))) for v in c)
        f1 = ",".join(str(int(round(v))) for v in fg1)
        f2 = ",".join(str(int(round(v))) for v in fg2)
        lines.append(f"{bg} : {f1} ; {f2}")
    with open(os.path.join(DATA, "colormap.txt"), "w") as f:
        f.write("\n".join(lines) + "\n")
    print(f"colormap: {len(lines)} entries")


WORDS = """
the of and to in is you that it he was for on are as with his they at be this
have from or one had by word but not what all were we when your can said there
use an each which she do how their if will up other about out many then them
these so some her would make like him into time has look two more write go see
number no way could people my than first water been call who oil its now find
long down day did get come made may part over new sound take only little work
know place year live me back give most very after thing our just name good
sentence man think say great where help through much before line right too mean
old any same tell boy follow came want show also around form three small set
put end does another well large must big even such because turn here why ask
went men read need land different home us move try kind hand picture again
change off play spell air away animal house point page letter mother answer
found study still learn should america world high every near add food between
own below country plant last school father keep tree never start city earth eye
light thought head under story saw left dont few while along might close
something seem next hard open example begin life always those both paper
together got group often run important until children side feet car mile night
walk white sea began grow took river four carry state once book hear stop
without second later miss idea enough eat face watch far indian really almost
let above girl sometimes mountain cut young talk soon list song being leave
family body music color stand sun questions fish area mark dog horse birds
problem complete room knew since ever piece told usually didnt friends easy
heard order red door sure become top ship across today during short better best
however low hours black products happened whole measure remember early waves
reached listen wind rock space covered fast several hold himself toward five
step morning passed vowel true hundred against pattern numeral table north slowly
money map farm pulled draw voice seen cold cried plan notice south sing war
ground fall king town unit figure certain field travel wood fire upon done
english road half ten fly gave box finally wait correct oh quickly person became
shown minutes strong verb stars front feel fact inches street decided contain
course surface produce building ocean class note nothing rest carefully
scientists inside wheels stay green known island week less machine base ago
stood plane system behind ran round boat game force brought understand warm
common bring explain dry though language shape deep thousands yes clear
equation yet government filled heat full hot check object am rule among noun
power cannot able six size dark ball material special heavy fine pair circle
include built cant matter square syllables perhaps bill felt suddenly test
direction center farmers ready anything divided general energy subject europe
moon region return believe dance members picked simple cells paint mind love
cause rain exercise eggs train blue wish drop developed window difference
distance heart sit sum summer wall forest probably legs sat main winter wide
written length reason kept interest arms brother race present beautiful store
job edge past sign record finished discovered wild happy beside gone sky glass
million west lay weather root instruments meet third months paragraph raised
represent soft whether clothes flowers shall teacher held describe drive cross
speak solve appear metal son either ice sleep village factors result jumped
snow ride care floor hill pushed baby buy century outside everything tall
already instead phrase soil bed copy free hope spring case laughed nation
quite type themselves temperature bright lead everyone method section lake
consonant within dictionary hair age amount scale pounds although per broken
moment tiny possible gold milk quiet natural lot stone act build middle speed
count cat someone sail rolled bear wonder smiled angle fraction africa killed
melody bottom trip hole poor lets fight surprise french died beat exactly
remain dress iron couldnt fingers row least catch climbed wrote shouted
continued itself else plains gas england burning design joined foot law ears
grass youre grew skin valley cents key president brown trouble cool cloud lost
sent symbols wear bad save experiment engine alone drawing east pay single
touch information express mouth yard equal decimal yourself control practice
report straight rise statement stick party seeds suppose woman coast bank
period wire choose clean visit bit whose received garden please strange caught
fell team god captain direct ring serve child desert increase history cost
maybe business separate break uncle hunting flow lady students human art
feeling supply corner electric insects crops tone hit sand doctor provide
thus wont cook bones tail board modern compound mine wasnt fit addition
belong safe soldiers guess silent trade rather compare crowd poem enjoy
elements indicate except expect flat seven interesting sense string blow
famous value wings movement pole exciting branches thick blood lie spot bell
fun loud consider suggested thin position entered fruit tied rich dollars
send sight chief japanese stream plants rhythm eight science major observe
tube necessary weight meat lifted process army hat property particular swim
terms current park sell shoulder industry wash block spread cattle wife sharp
company radio well action capital factories settled yellow isnt southern
truck fair printed wouldnt ahead chance born level triangle molecules france
repeated column western church sister oxygen plural various agreed opposite
wrong chart prepared pretty solution fresh shop suffix especially shoes
actually nose afraid dead sugar adjective fig office huge gun similar death
score forward stretched experience rose allow fear workers washington
greek women bought led march northern create british difficult match win
doesnt steel total deal determine evening nor rope cotton apple details
entire corn substances smell tools conditions cows track arrived located
sir seat division effect underline view
""".split()

PHRASES = [
    "fresh hot coffee", "open all night", "no parking here", "one way street",
    "keep off the grass", "sale ends today", "exit on the left", "mind the gap",
    "fresh fruit daily", "school zone ahead", "back in five minutes",
    "cash only please", "free entry today", "wet paint warning",
    "private road only", "now open late", "do not enter", "staff car park",
    "slow down please", "buy two get one", "welcome to town", "lost and found",
    "push to open", "pull to close", "out of service", "under new management",
    "open seven days", "thank you kindly", "watch your step", "first aid post",
    "tickets on sale", "bus stop moved", "road work ahead", "live music tonight",
    "fresh bread baked here", "last orders soon", "please queue here",
    "bike lane ends", "beach this way", "trail closed ahead", "quiet zone please",
    "heavy plant crossing", "local honey sold", "farm eggs fresh",
    "book fair saturday", "market day friday", "garage sale sunday",
    "lunch special today", "soup of the day", "catch of the day",
    "ice cream parlour", "games and toys", "tools for hire", "rooms to let",
    "house for sale", "land for lease", "boats for rent", "repairs while you wait",
    "keys cut here", "photos printed fast", "copies made cheap",
    "open door policy", "ring bell for service", "deliveries at rear",
    "loading zone only", "reserved for staff", "visitors must sign in",
    "danger high voltage", "hard hats required", "authorized personnel only",
    "fire assembly point", "emergency exit only", "alarm will sound",
    "smile you are on camera", "beware of the dog", "children at play",
    "speed bumps ahead", "blind corner sound horn", "falling rocks possible",
    "high tide at noon", "strong currents here", "no lifeguard on duty",
    "picnic area ahead", "camping this way", "scenic route begins",
    "historic town centre", "museum open daily", "gallery upstairs",
    "gift shop inside", "cafe at the gate", "tours leave hourly",
    "please do not feed the birds", "leave no trace", "take only pictures",
    "recycling point here", "glass bottles only", "paper and card",
    "bin day tuesday", "quiet carriage", "priority seating", "stand clear of doors",
    "next train in two minutes", "platform two for city", "change here for airport",
    "all day breakfast", "kids eat free", "table service only",
    "please wait to be seated", "today special stew", "pie and mash",
    "fish and chips", "tea and cake", "bed and breakfast", "park and ride",
    "stop look listen", "give way ahead", "end of motorway", "low bridge ahead",
    "weak bridge limit", "flood water deep", "ice on road", "sun glare ahead",
]

SOURCE_TEXT = """\
The morning market opened before sunrise, and by the time the first buses
rolled past the square the stalls were already loud with trade. Crates of
apples and pears stacked shoulder high, a chalk board promising fresh bread
until noon, and somewhere behind the fish counter a radio played an old song
about the sea. People moved slowly between the rows, reading the small signs,
weighing plums in their palms, counting coins into trays.

Down by the harbour the painters were at work again. Every spring the same
crew returns to strip the salt from the railings and lay on a new coat of
blue. The foreman keeps a little notebook of colours, one page per year, and
if you ask him nicely he will show you how the shade has drifted from navy
toward teal over two decades. Nothing stays fixed near the water, he says;
the weather edits everything.

The library on Hill Street keeps its doors open late on Thursdays. Students
take the long tables near the window, and the lamps come on one by one as
the light fails outside. A typed card above the shelf of maps asks readers
to handle the folded sheets gently, for paper remembers every crease. In the
back room the archivist scans old tickets, menus, and timetables, each one a
small record of how the town once spoke to itself in print.

On the road out of town there is a barn with a painted roof that pilots use
to find the airfield. The letters are four metres tall and renewed every
other summer. From the ground you can only read them from the top of the
water tower, which is perhaps why the farmer chose a cheerful word. Signs,
like seeds, are planted where they might be seen, and the whole countryside
is quietly written over with names, numbers, warnings, and welcomes.
"""


def write_text_assets():
    words = sorted(set(WORDS))
    with open(os.path.join(DATA, "words.txt"), "w") as f:
        f.write("\n".join(words) + "\n")
    with open(os.path.join(DATA, "phrases.txt"), "w") as f:
        f.write("\n".join(PHRASES) + "\n")
    with open(os.path.join(DATA, "source.txt"), "w") as f:
        f.write(SOURCE_TEXT)
    print(f"words: {len(words)}, phrases: {len(PHRASES)}")


def main():
    os.makedirs(DATA, exist_ok=True)
    copy_fonts()
    make_testfonts()
    bgs = make_backgrounds()
    make_colormap(bgs)
    write_text_assets()


if __name__ == "__main__":
    main()
