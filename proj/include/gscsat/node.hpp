#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gscsat/common.hpp"

namespace gscsat {

/// Knowledge-base catalog; ids are dense indices 0..size()-1.
class KnowledgeBaseCatalog {
 public:
  struct Entry {
    KbId id;
    std::string label;
  };

  KnowledgeBaseCatalog() = default;
  explicit KnowledgeBaseCatalog(std::vector<std::string> labels);
  /// Catalog of `count` entries labelled "kb0", "kb1", ...
  static KnowledgeBaseCatalog with_size(int count);

  int size() const { return static_cast<int>(entries_.size()); }
  const std::vector<Entry>& entries() const { return entries_; }
  bool contains(KbId id) const { return id >= 0 && id < size(); }

 private:
  std::vector<Entry> entries_;
};

enum class NodeKind { CommSat, AISat, Terminal };

std::string_view to_string(NodeKind kind);
NodeKind parse_node_kind(std::string_view text);

struct NodeSpec {
  NodeId id = kNoNode;
  NodeKind kind = NodeKind::CommSat;
  std::vector<int> encoderCaps;
  std::vector<int> decoderCaps;
  int computeCapacity = 0;
  std::string name;

  bool is_satellite() const { return kind != NodeKind::Terminal; }
  bool gsc_capable() const;
  bool can_encode(KbId kb) const;
  bool can_decode(KbId kb) const;
  /// Model slots in use (sum of both capability vectors).
  int used_slots() const;

  friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

/// Node with zeroed capability vectors sized for `kbCount`.
NodeSpec make_node(NodeId id, NodeKind kind, int kbCount, std::string name = {});

/// Throws ValidationError if the node violates its invariants.
void validate_node(const NodeSpec& node, int kbCount);

}  // namespace gscsat
