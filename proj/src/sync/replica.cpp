#include "sync/replica.hpp"

#include "session/digest.hpp"

namespace marginalia::sync {

using nlohmann::json;

std::optional<std::string> Replica::receive(std::string_view text) {
  const Envelope e = decode(text);
  if (e.kind == MessageKind::Delta) {
    const auto seq = e.payload.at("delta_seq").get<std::uint64_t>();
    if (awaiting_full_state_) return std::nullopt;
    if (!synced_ || seq != delta_seq_ + 1) return request_resync();
  }
  apply(e);
  return std::nullopt;
}

std::optional<std::string> Replica::request_resync() {
  awaiting_full_state_ = true;
  synced_ = false;
  ++resyncs_;
  return encode({++out_seq_, clock_ms_, MessageKind::ResyncRequest, json::object()});
}

void Replica::apply(const Envelope& e) {
  const json& p = e.payload;
  if (e.kind == MessageKind::FullState) {
    const json& state = p.at("state");
    clock_ms_ = state.at("clock_ms").get<Millis>();
    document_ = notes::NoteDocument::from_json(state.at("document"));
    slides_ = state.at("slides");
    transcripts_ = state.at("transcripts");
    tools_ = state.at("tools");
    interaction_ = p.at("interaction");
    navigator_ = p.at("navigator");
    lecture_ = p.at("lecture");
    layout_ = p.at("layout");
    engine_seq_ = p.at("engine_seq").get<std::uint64_t>();
    delta_seq_ = p.at("delta_seq").get<std::uint64_t>();
    synced_ = true;
    awaiting_full_state_ = false;
    return;
  }
  if (e.kind != MessageKind::Delta) return;
  engine_seq_ = p.at("engine_seq").get<std::uint64_t>();
  delta_seq_ = p.at("delta_seq").get<std::uint64_t>();
  clock_ms_ = p.at("clock_ms").get<Millis>();
  if (auto ops = p.find("doc_ops"); ops != p.end()) {
    for (const auto& op : *ops) document_.apply(notes::doc_op_from_json(op));
  }
  if (auto v = p.find("slides"); v != p.end()) slides_ = *v;
  if (auto v = p.find("transcripts"); v != p.end()) transcripts_ = *v;
  if (auto v = p.find("tools"); v != p.end()) tools_ = *v;
  if (auto v = p.find("interaction"); v != p.end()) interaction_ = *v;
  if (auto v = p.find("navigator"); v != p.end()) navigator_ = *v;
  if (auto v = p.find("layout"); v != p.end()) layout_ = *v;
}

json Replica::canonical_state() const {
  return {{"clock_ms", clock_ms_},
          {"document", document_.to_json()},
          {"slides", slides_},
          {"transcripts", transcripts_},
          {"tools", tools_}};
}

std::string Replica::digest() const { return sha256_hex(canonical_state().dump()); }

}  // namespace marginalia::sync
