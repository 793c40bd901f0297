import json
from pathlib import Path

SUITES = Path(__file__).resolve().parent.parent
D = "C:/Users/me/Documents"
P = D + "/paper"
def st(action, objects=(), variant=None, ua=False):
  d = {"user_assist": ua, "action": action, "objects": list(objects)}
  if variant is not None: d["variant"] = variant
  return d
def c(name, scenario, steps, expect=(), assist=None):
  d = {"name": name, "scenario": f"scenarios/{scenario}.json",
       "plan": {"command": name, "steps": steps}, "expect": list(expect)}
  if assist: d["assist"] = assist
  return d
login_expect = [{"field": {"window": "Chrome", "name": "User ID", "equals": "alice"}},
                {"field": {"window": "Chrome", "name": "Password", "equals": "s3cret"}},
                {"component": {"window": "Chrome", "name": "Signed in"}}]
cases = [
  c("text-input-v0", "expenses", [st("Text Input", ["Amount", "42"], 0)],
    [{"field": {"window": "Expenses", "name": "Amount", "equals": "42"}}]),
  c("text-input-v1", "expenses", [st("Text Input", ["Description", "Lunch"], 1)],
    [{"field": {"window": "Expenses", "name": "Description", "equals": "Lunch"}}]),
  c("click-v0", "expenses", [st("Click", ["Submit"], 0)],
    [{"component": {"window": "Expenses", "name": "Submitted"}}]),
  c("doubleclick-v0", "explorer", [st("Doubleclick", ["paper"], 0)], [{"title_contains": "paper"}]),
  c("rightclick-v0", "explorer", [st("Rightclick", ["notes.txt"], 0)]),
  c("drag-v0", "explorer", [st("Drag", ["photo.png", "paper"], 0)], [{"file_exists": P + "/photo.png"}]),
  c("scroll-v0", "explorer", [st("Scroll", [], 0)]),
  c("scroll-v1", "explorer", [st("Scroll", [], 1)]),
  c("press-v0", "notepad", [st("Press", ["ctrl+s"], 0)], [{"saved": "Notepad"}]),
  c("open-v0", "explorer", [st("Open", ["Notepad"], 0)], [{"focused": "Notepad"}]),
  c("open-v1", "explorer", [st("Open", ["notes.txt"], 1)], [{"title_contains": "notes.txt"}]),
  c("open-v2", "browser", [st("Open", ["weather"], 2)],
    [{"field": {"window": "Chrome", "name": "Search", "equals": "weather"}}]),
  c("close-v0", "notepad", [st("Close", [], 0)], [{"window_closed": "Notepad"}]),
  c("close-v1", "notepad", [st("Close", [], 1)], [{"window_closed": "Notepad"}]),
  c("switch-focus-v0", "multi", [st("Switch Focus", ["Notepad"], 0)], [{"focused": "Notepad"}]),
  c("switch-focus-v1", "multi", [st("Switch Focus", ["Chrome"], 1)], [{"focused": "Chrome"}]),
  c("switch-focus-v2", "browser", [st("Switch Focus", ["maps.google.com"], 2)], [{"url": "maps.google.com"}]),
  c("switch-focus-v3", "browser", [st("Switch Focus", [], 3)], [{"title_contains": "Daily News"}]),
  c("go-to-v0", "browser", [st("Go To", ["news.example.com/world"], 0)], [{"url": "news.example.com/world"}]),
  c("go-to-v1", "browser", [st("Go To", ["Gmail"], 1)], [{"url": "mail.google.com"}]),
  c("go-to-v2", "news", [st("Go To", ["Edition", "down"], 2)]),
  c("go-to-v3", "notepad", [st("Go To", ["down"], 3)]),
  c("save-v0", "notepad", [st("Save", [], 0)], [{"saved": "Notepad"}]),
  c("copy-v0", "explorer", [st("Copy", ["notes.txt"], 0)], [{"clipboard": "notes.txt"}]),
  c("paste-v0", "notepad", [st("Paste", [], 0)],
    [{"field": {"window": "Notepad", "name": "Text Editor", "contains": "world"}}]),
  c("delete-v0", "explorer", [st("Delete", ["old_log.txt"], 0)], [{"file_absent": D + "/old_log.txt"}]),
  c("rename-v0", "explorer", [st("Rename", ["notes.txt", "minutes"], 0)], [{"file_exists": D + "/minutes.txt"}]),
  c("login-v0", "portal", [st("Login", ["<user id>", "<password>"], 0, True)], login_expect,
    {"1": ["alice", "s3cret"]}),
  c("login-v1", "portal", [st("Login", ["<user id>", "<password>"], 1, True)], login_expect,
    {"1": ["alice", "s3cret"]}),
  c("repeat-v0", "explorer", [st("Delete", ["old_log.txt"]), st("Repeat", ["1", "todo.txt"], 0)],
    [{"file_absent": D + "/old_log.txt"}, {"file_absent": D + "/todo.txt"}]),
  c("wait-v0", "explorer", [st("Wait", [], 0)]),
]
suite = {"name": "dictionary", "cases": cases}
(SUITES / "dictionary.json").open("w").write(json.dumps(suite, indent=2) + "\n")
print(len(cases))
