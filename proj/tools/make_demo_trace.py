#!/usr/bin/env python3
"""Writes the scripted demo trace used for the pinned golden digest.

A simulated student annotates a slide, captures transcript blocks, takes
direct notes on the tablet, erases, browses old slides and returns live.
"""

import json
import sys
from pathlib import Path

GAZE_MS = 33   # ~30 Hz
PEN_MS = 8     # ~120 Hz


class Script:
    def __init__(self):
        self.events = []

    def add(self, t, kind, payload, origin):
        self.events.append((t, kind, payload, origin))

    def gaze(self, t, surface, x, y):
        self.add(t, "gaze", {"hit": {"surface": surface, "x": x, "y": y}}, "headset")

    def pen(self, t, phase, x=None, y=None):
        p = {"phase": phase}
        if phase != "away":
            p["x"], p["y"] = round(x, 6), round(y, 6)
        self.add(t, "pen", p, "tablet")

    def fixate(self, t0, t1, surface, x, y):
        t = t0
        while t < t1:
            self.gaze(t, surface, x, y)
            t += GAZE_MS

    def stroke(self, t0, path, phase="contact"):
        """Pen samples along a polyline at 120 Hz; returns the end time."""
        t = t0
        for (ax, ay), (bx, by) in zip(path, path[1:]):
            for i in range(6):
                f = i / 6
                self.pen(t, phase, ax + (bx - ax) * f, ay + (by - ay) * f)
                t += PEN_MS
        self.pen(t, phase, *path[-1])
        return t + PEN_MS

    def gesture(self, t, name):
        self.add(t, "gesture", {"gesture": name}, "tablet")

    def attention(self, t, name):
        self.add(t, "attention", {"attention": name}, "headset")

    def tablet_button(self, t, name):
        self.add(t, "tablet_button", {"button": name}, "tablet")

    def tick(self, t):
        self.add(t, "tick", {}, "server")


def build():
    s = Script()
    # Slide 1: look at the Slides Panel and circle the title.
    s.fixate(4000, 4500, "slides", 0.3, 0.1)
    t = s.stroke(4500, [(0.5, 0.5), (0.5, 0.5)], "hover")
    t = s.stroke(t, [(0.5, 0.5), (0.6, 0.5), (0.6, 0.55), (0.4, 0.55), (0.4, 0.5), (0.5, 0.5)])
    t = s.stroke(t, [(0.5, 0.5), (0.52, 0.48)], "hover")
    s.pen(t, "away")

    # Squeeze to capture the transcript block being read.
    s.fixate(50000, 50400, "transcripts", 0.5, 0.5)
    s.gesture(50400, "squeeze")

    # Slide 2, second build: switch to highlighter and underline a bullet.
    s.fixate(85000, 85400, "slides", 0.2, 0.35)
    s.gesture(85400, "double_tap")
    t = s.stroke(85500, [(0.3, 0.6)], "hover")
    t = s.stroke(t, [(0.3, 0.6), (0.7, 0.6)])
    s.pen(t, "away")
    # A second underline soon after joins the same open capture.
    s.fixate(86500, 86800, "slides", 0.2, 0.45)
    t = s.stroke(86800, [(0.3, 0.6)], "hover")
    t = s.stroke(t, [(0.3, 0.6), (0.7, 0.6)])
    s.pen(t, "away")
    s.gesture(87500, "double_tap")

    # Heads down: direct notes on the tablet.
    s.attention(130000, "direct")
    t = s.stroke(130100, [(0.1, 0.5), (0.2, 0.45), (0.3, 0.5), (0.4, 0.45)])
    s.pen(t, "away")
    t = s.stroke(131000, [(0.1, 0.6), (0.4, 0.6)])
    s.pen(t, "away")
    # Erase the second line with the tablet palette eraser.
    s.tablet_button(132000, "tool_eraser")
    t = s.stroke(132200, [(0.25, 0.55), (0.25, 0.65)])
    s.pen(t, "away")
    s.tablet_button(133000, "tool_pen")
    s.attention(134000, "indirect")

    # Annotate a transcript block.
    s.fixate(200000, 200300, "transcripts", 0.4, 0.3)
    t = s.stroke(200300, [(0.5, 0.5)], "hover")
    t = s.stroke(t, [(0.5, 0.5), (0.8, 0.5)])
    s.pen(t, "away")

    # Browse back: hover to the slide navigator along the bottom edge.
    s.fixate(400000, 400300, "slides", 0.5, 0.95)
    t = s.stroke(400300, [(0.5, 0.5), (0.5, 0.56)], "hover")
    t = s.stroke(t, [(0.5, 0.56)])
    t = s.stroke(t, [(0.5, 0.56)], "hover")
    s.pen(t, "away")
    # Annotate the old slide while paused, then squeeze it into the notes.
    s.fixate(402000, 402300, "slides", 0.5, 0.5)
    t = s.stroke(402300, [(0.5, 0.5)], "hover")
    t = s.stroke(t, [(0.5, 0.5), (0.55, 0.6), (0.6, 0.5)])
    t = s.stroke(t, [(0.6, 0.5)], "hover")
    s.gesture(t, "squeeze")
    s.pen(t + 50, "away")

    # Back to live via the button on the Slides Panel's right edge.
    s.fixate(430000, 430300, "slides", 0.9, 0.05)
    t = s.stroke(430300, [(0.5, 0.5), (0.62, 0.5)], "hover")
    t = s.stroke(t, [(0.62, 0.5)])
    t = s.stroke(t, [(0.62, 0.5)], "hover")
    s.pen(t, "away")

    # Scroll the notes from the tablet.
    s.tablet_button(500000, "notes_scroll_up")
    s.tablet_button(501000, "notes_scroll_down")

    for t in range(0, 720_001, 1000):
        s.tick(t)

    s.events.sort(key=lambda e: e[0])
    return s.events


def main(out):
    with open(out, "w", newline="\n") as f:
        for seq, (t, kind, payload, origin) in enumerate(build(), 1):
            record = {"seq": seq, "t_ms": t, "type": kind, "payload": payload, "origin": origin}
            f.write(json.dumps(record, separators=(",", ":")) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "demo_trace.ndjson")
