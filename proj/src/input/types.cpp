#include "input/types.hpp"

#include <array>
#include <charconv>
#include <utility>

namespace marginalia::input {
namespace {

constexpr std::array<std::pair<ButtonKind, std::string_view>, 9> kButtonNames{{
    {ButtonKind::SlidesLive, "slides_live"},
    {ButtonKind::TranscriptsLive, "transcripts_live"},
    {ButtonKind::TranscriptsScrollUp, "transcripts_scroll_up"},
    {ButtonKind::TranscriptsScrollDown, "transcripts_scroll_down"},
    {ButtonKind::NotesScrollUp, "notes_scroll_up"},
    {ButtonKind::NotesScrollDown, "notes_scroll_down"},
    {ButtonKind::ToolPen, "tool_pen"},
    {ButtonKind::ToolHighlighter, "tool_highlighter"},
    {ButtonKind::ToolEraser, "tool_eraser"},
}};

constexpr std::string_view kThumbPrefix = "slide_thumb:";
constexpr std::string_view kButtonPrefix = "button:";

}  // namespace

std::string ButtonId::to_string() const {
  if (kind == ButtonKind::SlideThumb) return std::string(kThumbPrefix) + std::to_string(thumb);
  for (const auto& [k, name] : kButtonNames) {
    if (k == kind) return std::string(name);
  }
  return "unknown";
}

std::optional<ButtonId> ButtonId::parse(std::string_view text) {
  if (text.substr(0, kThumbPrefix.size()) == kThumbPrefix) {
    const auto digits = text.substr(kThumbPrefix.size());
    int n = -1;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || n < 0 || digits.empty()) {
      return std::nullopt;
    }
    return ButtonId{ButtonKind::SlideThumb, n};
  }
  for (const auto& [k, name] : kButtonNames) {
    if (name == text) return ButtonId{k, 0};
  }
  return std::nullopt;
}

std::string Surface::to_string() const {
  switch (kind) {
    case SurfaceKind::SlidesPanel: return "slides";
    case SurfaceKind::TranscriptsPanel: return "transcripts";
    case SurfaceKind::NotesPanel: return "notes";
    case SurfaceKind::TabletDirect: return "tablet";
    case SurfaceKind::Button: return std::string(kButtonPrefix) + button.to_string();
  }
  return "unknown";
}

std::optional<Surface> Surface::parse(std::string_view text) {
  if (text == "slides") return slides();
  if (text == "transcripts") return transcripts();
  if (text == "notes") return notes();
  if (text == "tablet") return tablet();
  if (text.substr(0, kButtonPrefix.size()) == kButtonPrefix) {
    if (auto b = ButtonId::parse(text.substr(kButtonPrefix.size()))) return of(*b);
  }
  return std::nullopt;
}

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::Idle: return "idle";
    case Mode::Hover: return "hover";
    case Mode::PenDown: return "pen_down";
  }
  return "idle";
}

const char* to_string(Attention attention) {
  return attention == Attention::Direct ? "direct" : "indirect";
}

const char* to_string(PenPhase phase) {
  switch (phase) {
    case PenPhase::Away: return "away";
    case PenPhase::Hover: return "hover";
    case PenPhase::Contact: return "contact";
  }
  return "away";
}

const char* to_string(Gesture gesture) {
  return gesture == Gesture::DoubleTap ? "double_tap" : "squeeze";
}

}  // namespace marginalia::input
