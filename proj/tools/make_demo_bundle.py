#!/usr/bin/env python3
"""Regenerates data/demo_lecture: slide images, manifest and transcript."""

import json
import sys
from pathlib import Path

from PIL import Image, ImageDraw, ImageFont

DURATION_MS = 720_000
SLIDE_MS = 60_000
W, H = 640, 480

# (title, bullets revealed one build at a time, narration)
SLIDES = [
    ("Hash Tables", [],
     ["Good morning everyone, today we are going to talk about hash tables.",
      "They are one of the most useful data structures you will ever meet.",
      "Almost every language ships one in its standard library.",
      "By the end of the hour you should be able to build your own.",
      "Let's start with the problem they solve."]),
    ("The lookup problem", ["Arrays: O(1) by index", "Lists: O(n) by key", "Goal: O(1) by key"],
     ["Suppose we want to store pairs of keys and values.",
      "An array gives us constant time access, but only by integer index.",
      "A linked list lets us use any key, but lookup walks the whole list.",
      "What we really want is constant time access by an arbitrary key.",
      "That is exactly the promise of a hash table."]),
    ("Hash functions", ["h(key) -> integer", "Deterministic", "Spreads keys evenly"],
     ["The central idea is a hash function.",
      "It maps a key to an integer, which we then reduce to a bucket index.",
      "The function must be deterministic, the same key always gives the same number.",
      "It should also spread keys evenly over the buckets.",
      "A poor hash function turns our table back into a list."]),
    ("Collisions", ["Pigeonhole principle", "Two keys, one bucket"],
     ["Sooner or later two keys will land in the same bucket.",
      "This is unavoidable, there are more possible keys than buckets.",
      "We call this a collision.",
      "How we handle collisions is the main design decision in a hash table."]),
    ("Separate chaining", ["Bucket = list of entries", "Insert at head", "Search the chain"],
     ["The simplest strategy is separate chaining.",
      "Each bucket holds a small list of entries.",
      "To insert, we hash the key and push the entry onto that bucket's list.",
      "To look up, we hash the key and scan only that one short list.",
      "If the lists stay short, every operation stays fast."]),
    ("Open addressing", ["All entries in one array", "Probe on collision", "Linear, quadratic, double hashing"],
     ["The alternative is open addressing.",
      "Here every entry lives directly in the array.",
      "When a slot is taken, we probe for another one following a fixed sequence.",
      "Linear probing simply tries the next slot.",
      "Quadratic probing and double hashing jump further to avoid clustering."]),
    ("Load factor", ["alpha = n / m", "Chaining: alpha around 1", "Open addressing: alpha below 0.7"],
     ["The load factor is the number of entries divided by the number of buckets.",
      "It tells us how crowded the table is.",
      "With chaining, a load factor near one is perfectly fine.",
      "With open addressing, performance collapses as the table fills up.",
      "Most implementations keep it below about seventy percent."]),
    ("Resizing", ["Grow when alpha too high", "Rehash every entry", "Amortized O(1)"],
     ["When the load factor gets too high we resize the table.",
      "We allocate a bigger array, usually twice the size.",
      "Then every entry has to be rehashed into its new bucket.",
      "That single step is expensive, but it happens rarely.",
      "Averaged over many inserts, the cost per insert is still constant."]),
    ("Deletion", ["Chaining: unlink", "Open addressing: tombstones"],
     ["Deleting from a chained table is easy, we just unlink the entry.",
      "Open addressing is trickier.",
      "If we simply empty the slot, we can break a probe sequence for other keys.",
      "Instead we leave a tombstone marker that lookups skip over.",
      "Tombstones are cleaned up the next time we resize."]),
    ("Worst case", ["All keys collide", "O(n) per operation", "Hash flooding attacks"],
     ["Everything we said so far assumes a good hash function.",
      "In the worst case every key lands in the same bucket.",
      "Then each operation costs linear time.",
      "Attackers have exploited this by sending carefully chosen keys to web servers.",
      "Randomized hash functions are the standard defence."]),
    ("In practice", ["Python dict", "Java HashMap", "C++ unordered_map"],
     ["Let's look at some real implementations.",
      "Python's dictionary uses open addressing with a clever probing scheme.",
      "Java's HashMap uses chaining and switches long chains to balanced trees.",
      "The C++ unordered map uses chaining with one list per bucket.",
      "Each design trades memory against speed differently."]),
    ("Summary", ["Hash, then index", "Handle collisions", "Keep the load factor low"],
     ["To summarize, a hash table hashes a key and uses the result as an index.",
      "Collisions are handled by chaining or by probing.",
      "Keeping the load factor low keeps operations fast on average.",
      "Next week we will use hash tables to build a spelling checker.",
      "Thanks for listening, see you on Thursday."]),
]


def font(size):
    for name in ("DejaVuSans.ttf", "/usr/share/fonts/truetype/dejavu/DejaVuSans.ttf"):
        try:
            return ImageFont.truetype(name, size)
        except OSError:
            pass
    return ImageFont.load_default()


def render(title, bullets, shown, number):
    img = Image.new("RGB", (W, H), "white")
    d = ImageDraw.Draw(img)
    d.rectangle([0, 0, W, 70], fill=(32, 64, 128))
    d.text((24, 18), title, fill="white", font=font(30))
    for i, b in enumerate(bullets[:shown]):
        d.text((48, 110 + i * 56), "• " + b, fill=(20, 20, 20), font=font(24))
    d.text((W - 60, H - 36), str(number), fill=(120, 120, 120), font=font(18))
    return img


def timecode(ms):
    h, rest = divmod(ms, 3_600_000)
    m, rest = divmod(rest, 60_000)
    s, ms = divmod(rest, 1000)
    return f"{h:02}:{m:02}:{s:02},{ms:03}"


def main(out):
    out = Path(out)
    (out / "slides").mkdir(parents=True, exist_ok=True)
    events, cues = [], []
    for n, (title, bullets, narration) in enumerate(SLIDES):
        start = n * SLIDE_MS
        builds = max(1, len(bullets))
        # Build 0 shows the title and first bullet; later builds add one bullet each.
        for b in range(builds):
            name = f"slides/s{n + 1:02}_b{b}.png"
            render(title, bullets, b + 1, n + 1).save(out / name, optimize=True)
            events.append({"t_ms": start + b * (SLIDE_MS // builds), "image": name,
                           "slide_index": n, "build_index": b})
        # Narration fills the slide's minute with short pauses between cues.
        total_chars = sum(len(s) for s in narration)
        t = start + 1500
        budget = SLIDE_MS - 1500 - 400 * len(narration)
        for sentence in narration:
            length = budget * len(sentence) // total_chars
            cues.append((t, t + length, sentence))
            t += length + 400
    manifest = {"title": "Data Structures, Lecture 7: Hash Tables", "duration_ms": DURATION_MS,
                "slide_aspect_ratio": W / H, "slides": events}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    with open(out / "transcript.srt", "w", newline="\n") as f:
        for i, (a, b, text) in enumerate(cues, 1):
            f.write(f"{i}\n{timecode(a)} --> {timecode(b)}\n{text}\n\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "demo_lecture")
