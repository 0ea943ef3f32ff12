#include "gscsat/node.hpp"

#include <algorithm>
#include <numeric>

namespace gscsat {

KnowledgeBaseCatalog::KnowledgeBaseCatalog(std::vector<std::string> labels) {
  entries_.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    entries_.push_back({static_cast<KbId>(i), std::move(labels[i])});
  }
}

KnowledgeBaseCatalog KnowledgeBaseCatalog::with_size(int count) {
  if (count < 0) throw ValidationError("knowledge-base count must be non-negative");
  std::vector<std::string> labels;
  for (int i = 0; i < count; ++i) labels.push_back("kb" + std::to_string(i));
  return KnowledgeBaseCatalog(std::move(labels));
}

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::CommSat:
      return "comm";
    case NodeKind::AISat:
      return "ai";
    case NodeKind::Terminal:
      return "terminal";
  }
  return "?";
}

NodeKind parse_node_kind(std::string_view text) {
  if (text == "comm") return NodeKind::CommSat;
  if (text == "ai") return NodeKind::AISat;
  if (text == "terminal") return NodeKind::Terminal;
  throw ValidationError("unknown node kind '" + std::string(text) + "'");
}

bool NodeSpec::gsc_capable() const {
  auto positive = [](int v) { return v >= 1; };
  return std::any_of(encoderCaps.begin(), encoderCaps.end(), positive) ||
         std::any_of(decoderCaps.begin(), decoderCaps.end(), positive);
}

bool NodeSpec::can_encode(KbId kb) const {
  return kb >= 0 && kb < static_cast<KbId>(encoderCaps.size()) && encoderCaps[kb] >= 1;
}

bool NodeSpec::can_decode(KbId kb) const {
  return kb >= 0 && kb < static_cast<KbId>(decoderCaps.size()) && decoderCaps[kb] >= 1;
}

int NodeSpec::used_slots() const {
  return std::accumulate(encoderCaps.begin(), encoderCaps.end(), 0) +
         std::accumulate(decoderCaps.begin(), decoderCaps.end(), 0);
}

NodeSpec make_node(NodeId id, NodeKind kind, int kbCount, std::string name) {
  NodeSpec n;
  n.id = id;
  n.kind = kind;
  n.encoderCaps.assign(kbCount, 0);
  n.decoderCaps.assign(kbCount, 0);
  n.name = std::move(name);
  return n;
}

void validate_node(const NodeSpec& node, int kbCount) {
  const std::string who = "node " + std::to_string(node.id);
  if (static_cast<int>(node.encoderCaps.size()) != kbCount ||
      static_cast<int>(node.decoderCaps.size()) != kbCount) {
    throw ValidationError(who + ": capability vectors must have length " + std::to_string(kbCount));
  }
  auto negative = [](int v) { return v < 0; };
  if (std::any_of(node.encoderCaps.begin(), node.encoderCaps.end(), negative) ||
      std::any_of(node.decoderCaps.begin(), node.decoderCaps.end(), negative)) {
    throw ValidationError(who + ": negative capability entry");
  }
  if (node.computeCapacity < 0) throw ValidationError(who + ": negative compute capacity");
  if (node.kind == NodeKind::CommSat && node.gsc_capable()) {
    throw ValidationError(who + ": communication satellites cannot host models");
  }
}

}  // namespace gscsat
