import json
from pathlib import Path

SUITES = Path(__file__).resolve().parent.parent
DOCS = "Documents - File Explorer"


class Log:
  def __init__(self, start):
    self.ts = start
    self.events = []

  def add(self, kind, app, title, env, target=None, ctype="ListItem", **extra):
    e = {"ts": self.ts, "kind": kind, "window": {"app": app, "title": title, "env_class": env}}
    if target is not None:
      e["target"] = {"name": target, "control_type": ctype, "position": [40, 60]}
    e.update(extra)
    self.events.append(e)
    self.ts += 1200
    return self

  def gap(self, ms=3_600_000):
    self.ts += ms
    return self

  def write(self, path):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as f:
      for e in self.events:
        f.write(json.dumps(e) + "\n")


def basic():
  fe = ("File Explorer", DOCS, "Local")
  portal = ("Chrome", "Employee Portal - Chrome", "Web")
  exp = ("Expenses", "Expense Report", "App")
  log = Log(1_760_000_000_000)
  log.add("mouse-click", *fe, "notes.txt").add("key-press", *fe, keys="f2")
  log.add("key-type", *fe, text="meeting-notes").add("key-press", *fe, keys="enter")
  log.gap()
  log.add("mouse-click", *fe, "old_log.txt").add("key-press", *fe, keys="ctrl+d")
  log.gap()
  log.add("mouse-click", *portal, "Login", "Button").add("mouse-click", *portal, "User ID", "Edit")
  log.add("key-type", *portal, text="alice").add("mouse-click", *portal, "Password", "Edit")
  log.add("key-type", *portal, text="s3cret").add("key-press", *portal, keys="enter")
  log.gap()
  log.add("mouse-click", *exp, "Amount", "Edit").add("key-type", *exp, text="42")
  log.add("key-press", *exp, keys="enter")
  log.write(SUITES / "logs" / "basic" / "demo.jsonl")


if __name__ == "__main__":
  basic()
