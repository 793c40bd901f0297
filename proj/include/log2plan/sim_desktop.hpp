#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "log2plan/gui_backend.hpp"

namespace log2plan {

struct SimComponent {
  std::string name;
  std::string control_type;
  Point position;
  std::string value;
  bool editable = false;
  int reveal = 0;        // scroll steps before the component becomes visible
  std::string opens;     // app, file or folder opened when activated
  std::string link;      // URL followed on click
  std::vector<std::string> options;  // dropdown or context-menu entries

  friend bool operator==(const SimComponent&, const SimComponent&) = default;
};

void to_json(nlohmann::json& j, const SimComponent& c);
void from_json(const nlohmann::json& j, SimComponent& c);

enum class WindowKind { normal, start_menu, task_switcher, context_menu, dropdown, menubar };

std::string_view to_string(WindowKind k);

struct SimTab {
  std::string url;
  std::string title;

  friend bool operator==(const SimTab&, const SimTab&) = default;
};

struct SimWindow {
  int id = 0;
  std::string app;
  std::string title;
  EnvClass env_class = EnvClass::App;
  WindowKind kind = WindowKind::normal;
  std::vector<SimComponent> components;
  int scroll = 0;
  int page_rows = 12;
  std::optional<std::string> directory;  // file-list windows
  std::vector<SimTab> tabs;              // browsers
  int active_tab = 0;
  std::string focus;     // focused or selected component
  int highlight = -1;    // overlay selection
  int owner = -1;        // window an overlay belongs to
  std::string subject;   // component a context menu was opened on
  std::string buffer;    // start-menu search, rename or new-tab text
  std::string renaming;  // item in rename mode
  bool address_mode = false;
  bool saved = false;

  bool browser() const { return env_class == EnvClass::Web; }
  friend bool operator==(const SimWindow&, const SimWindow&) = default;
};

struct SimFile {
  std::string dir;
  std::string name;
  bool folder = false;
  std::string content;

  std::string path() const { return dir.empty() ? name : dir + "/" + name; }
  friend bool operator==(const SimFile&, const SimFile&) = default;
};

struct AppTemplate {
  std::string title;
  EnvClass env_class = EnvClass::App;
  std::vector<SimComponent> components;
  std::optional<std::string> directory;
  std::optional<std::string> url;
  std::vector<std::string> extensions;  // file types the app opens
  int page_rows = 12;
};

struct SimPage {
  std::string title;
  std::vector<SimComponent> components;
};

struct TriggerCondition {
  std::string verb;    // executor verb name; empty matches any
  std::string target;  // component name
  std::string app;     // focused window app before the action
  std::string title;   // substring of that window's title
  std::string keys;
  std::string text;
};

struct Trigger {
  TriggerCondition when;
  std::vector<nlohmann::json> then;
  bool fired = false;
};

struct SimState {
  std::vector<SimWindow> windows;  // z-order; the front window has focus
  std::string clipboard;
  bool clipboard_is_item = false;
  std::string clipboard_dir;
  std::vector<SimFile> files;
  std::map<std::string, AppTemplate> apps;
  std::map<std::string, SimPage> pages;
  std::vector<Trigger> triggers;
  std::uint64_t rng_seed = 0;
  int next_id = 1;
  Point screen{1920, 1080};
};

class SimDesktop final : public GuiBackend {
 public:
  SimDesktop();
  explicit SimDesktop(SimState initial);

  // Scenario file: apps, pages, files, windows (front first), clipboard, triggers.
  static SimDesktop from_json(const nlohmann::json& scenario);
  static SimDesktop load(const std::string& path);

  Snapshot capture() override;
  ActionResult apply(const LowLevelAction& a) override;
  Point screen_bounds() const override { return state_.screen; }

  void reset();
  const SimState& state() const { return state_; }
  nlohmann::json state_json() const;
  std::string hash() const;

  // Final-state assertion; returns the failure message, or nullopt when it holds.
  std::optional<std::string> check(const nlohmann::json& predicate) const;

 private:
  SimState initial_;
  SimState state_;
};

}  // namespace log2plan
