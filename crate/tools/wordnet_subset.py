#!/usr/bin/env python3
"""Extract a hypernym-closed subset of WordNet 3.0 in database-file format.

Usage: wordnet_subset.py <wordnet-3.0-dict-dir> <out-dir> [extra-lemma ...]

Keeps the first two senses of every lemma whose SemCor tag count
(cntlist.rev) passes a per-POS threshold, plus the listed extra lemmas,
closes the set under hypernym / instance-hypernym pointers, drops pointers
to synsets outside the subset and rewrites every byte offset.
"""
import collections
import os
import re
import sys

POS_FILES = {"n": "noun", "v": "verb", "a": "adj", "r": "adv"}
THRESHOLD = {"n": 15, "v": 40, "a": 40, "r": 40}
SENSES = 2


def norm_pos(c):
    return "a" if c == "s" else c


def read_lines(path):
    with open(path, encoding="latin-1") as f:
        return f.readlines()


def parse_data(src):
    header, syn = {}, {}
    for p, name in POS_FILES.items():
        hdr = []
        for line in read_lines(os.path.join(src, "data." + name)):
            if line.startswith("  "):
                hdr.append(line)
                continue
            body, _, gloss = line.rstrip("\n").partition(" | ")
            t = body.split()
            off = int(t[0])
            wc = int(t[3], 16)
            words = [(t[4 + 2 * i], t[5 + 2 * i]) for i in range(wc)]
            i = 4 + 2 * wc
            pc = int(t[i])
            i += 1
            ptrs = []
            for _ in range(pc):
                ptrs.append((t[i], int(t[i + 1]), t[i + 2], t[i + 3]))
                i += 4
            frames = t[i:]
            syn[(p, off)] = dict(lex=t[1], ss=t[2], words=words, ptrs=ptrs,
                                 frames=frames, gloss=gloss)
        header[p] = hdr
    return header, syn


def parse_index(src):
    header, idx = {}, {}
    for p, name in POS_FILES.items():
        hdr = []
        for line in read_lines(os.path.join(src, "index." + name)):
            if line.startswith("  "):
                hdr.append(line)
                continue
            t = line.split()
            pc = int(t[3])
            idx[(p, t[0])] = dict(ptrs=t[4:4 + pc], tagged=int(t[5 + pc]),
                                  offs=[int(x) for x in t[6 + pc:]])
        header[p] = hdr
    return header, idx


def tag_counts(src):
    f = collections.Counter()
    for line in read_lines(os.path.join(src, "cntlist.rev")):
        key, _, cnt = line.split()
        lemma, rest = key.split("%")
        pos = {"1": "n", "2": "v", "3": "a", "4": "r", "5": "a"}[rest[0]]
        f[(pos, lemma)] += int(cnt)
    return f


def strip_marker(word):
    return re.sub(r"\([a-z]+\)$", "", word).lower()


def main():
    src, out = sys.argv[1], sys.argv[2]
    extra = sys.argv[3:]
    data_hdr, syn = parse_data(src)
    idx_hdr, idx = parse_index(src)
    freq = tag_counts(src)

    keep = set()
    for (p, lemma), e in idx.items():
        if freq[(p, lemma)] >= THRESHOLD[p] or lemma in extra:
            for off in e["offs"][:SENSES]:
                keep.add((p, off))
    stack = list(keep)
    while stack:
        k = stack.pop()
        for sym, off, pos, _ in syn[k]["ptrs"]:
            h = (norm_pos(pos), off)
            if sym in ("@", "@i") and h not in keep:
                keep.add(h)
                stack.append(h)

    os.makedirs(out, exist_ok=True)
    new_off = {}
    lines = {}
    # Offsets are fixed-width, so line lengths do not depend on their values.
    for p, name in POS_FILES.items():
        pos_keys = sorted(k for k in keep if k[0] == p)
        pos = sum(len(h.encode("latin-1")) for h in data_hdr[p])
        rendered = []
        for k in pos_keys:
            s = syn[k]
            ptrs = [x for x in s["ptrs"] if (norm_pos(x[2]), x[1]) in keep]
            s["kept_ptrs"] = ptrs
            line = render_data(0, s, ptrs, {})
            new_off[k] = pos
            pos += len(line.encode("latin-1"))
            rendered.append(k)
        lines[p] = rendered
    for p, name in POS_FILES.items():
        with open(os.path.join(out, "data." + name), "w", encoding="latin-1", newline="") as f:
            f.writelines(data_hdr[p])
            for k in lines[p]:
                s = syn[k]
                line = render_data(new_off[k], s, s["kept_ptrs"], new_off)
                assert f.tell() == new_off[k], (k, f.tell(), new_off[k])
                f.write(line)

    indexed = collections.defaultdict(set)
    for k in keep:
        for w, _ in syn[k]["words"]:
            indexed[k[0]].add(strip_marker(w))
    for p, name in POS_FILES.items():
        with open(os.path.join(out, "index." + name), "w", encoding="latin-1", newline="") as f:
            f.writelines(idx_hdr[p])
            for lemma in sorted(indexed[p]):
                e = idx.get((p, lemma))
                if e is None:
                    continue
                offs = [o for o in e["offs"] if (p, o) in keep]
                if not offs:
                    continue
                tagged = sum(1 for i, o in enumerate(e["offs"]) if i < e["tagged"] and (p, o) in keep)
                syms = set()
                for o in offs:
                    syms.update(x[0] for x in syn[(p, o)]["kept_ptrs"])
                ptrs = [x for x in e["ptrs"] if x in syms]
                f.write("%s %s %d %d %s%d %d %s  \n" % (
                    lemma, p, len(offs), len(ptrs),
                    "".join(x + " " for x in ptrs), len(offs), tagged,
                    " ".join("%08d" % new_off[(p, o)] for o in offs)))
        exc = os.path.join(src, name + ".exc")
        with open(os.path.join(out, name + ".exc"), "w", encoding="latin-1", newline="") as f:
            for line in read_lines(exc):
                bases = line.split()[1:]
                if any(b in indexed[p] for b in bases):
                    f.write(line)
    print("kept %d synsets (%d nouns)" % (len(keep), sum(1 for k in keep if k[0] == "n")))


def render_data(off, s, ptrs, new_off):
    words = " ".join("%s %s" % w for w in s["words"])
    ps = " ".join("%s %08d %s %s" % (sym, new_off.get((norm_pos(pos), o), 0), pos, st)
                  for sym, o, pos, st in ptrs)
    parts = ["%08d" % off, s["lex"], s["ss"], "%02x" % len(s["words"]), words, "%03d" % len(ptrs)]
    if ps:
        parts.append(ps)
    if s["frames"]:
        parts.append(" ".join(s["frames"]))
    return " ".join(parts) + " | " + s["gloss"] + "\n"


if __name__ == "__main__":
    main()
