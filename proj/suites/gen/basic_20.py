import json
from pathlib import Path

SUITES = Path(__file__).resolve().parent.parent
D = "C:/Users/me/Documents"
P = D + "/paper"
def c(name, command, scenario, expect, assist=None):
  d = {"name": name, "command": command, "scenario": f"scenarios/{scenario}.json", "expect": expect}
  if assist: d["assist"] = assist
  return d
cases = [
  c("rename-file", "rename notes.txt to meeting-notes", "explorer",
    [{"file_exists": D + "/meeting-notes.txt"}, {"file_absent": D + "/notes.txt"}]),
  c("delete-file", "delete old_log.txt", "explorer", [{"file_absent": D + "/old_log.txt"}]),
  c("worked-example", "open the paper folder, then rename draft.docx to Transformer", "explorer",
    [{"file_exists": P + "/Transformer.docx"}]),
  c("open-text-file", "open notes.txt", "explorer", [{"focused": "Notepad"}, {"title_contains": "notes.txt"}]),
  c("duplicate-file", "copy report.docx, then paste", "explorer", [{"file_exists": D + "/report - Copy.docx"}]),
  c("move-file", "drag photo.png to the paper folder", "explorer",
    [{"file_exists": P + "/photo.png"}, {"file_absent": D + "/photo.png"}]),
  c("write-and-save", "type Hello World into the Text Editor, then save", "notepad",
    [{"field": {"window": "Notepad", "name": "Text Editor", "contains": "Hello World"}}, {"saved": "Notepad"}]),
  c("save-shortcut", "press ctrl+s", "notepad", [{"saved": "Notepad"}]),
  c("close-app", "close Notepad", "notepad", [{"window_closed": "Notepad"}, {"focused": "File Explorer"}]),
  c("address-bar", "go to news.example.com", "browser", [{"url": "news.example.com"}]),
  c("web-search", "search for weather in Chrome", "browser",
    [{"field": {"window": "Chrome", "name": "Search", "equals": "weather"}}]),
  c("follow-link", "go to news.example.com, then follow the Sports link", "browser",
    [{"url": "news.example.com/sports"}]),
  c("portal-login", "log in to the portal", "portal",
    [{"field": {"window": "Chrome", "name": "User ID", "equals": "alice"}}, {"component": {"window": "Chrome", "name": "Signed in"}}],
    {"1": ["alice", "s3cret"]}),
  c("below-the-fold", "open zeta_archive.txt", "explorer", [{"title_contains": "zeta_archive.txt"}]),
  c("switch-window", "switch to Notepad", "multi", [{"focused": "Notepad"}]),
  c("duplicate-text", "copy the Text Editor, then paste into the Text Editor", "notepad",
    [{"field": {"window": "Notepad", "name": "Text Editor", "equals": "hellohello"}}]),
  c("launch-app", "open Notepad", "explorer", [{"focused": "Notepad"}]),
  c("new-tab", "switch to maps.google.com", "browser", [{"url": "maps.google.com"}]),
  c("fill-form", "fill in Amount with 42, type Lunch into the Description field, then click Submit", "expenses",
    [{"field": {"window": "Expenses", "name": "Amount", "equals": "42"}},
     {"field": {"window": "Expenses", "name": "Description", "equals": "Lunch"}},
     {"component": {"window": "Expenses", "name": "Submitted"}}]),
  c("enter-folder", "double-click the paper folder", "explorer", [{"title_contains": "paper"}]),
]
suite = {"name": "basic-20", "logs": ["logs/basic"], "cases": cases}
(SUITES / "basic-20.json").open("w").write(json.dumps(suite, indent=2) + "\n")
