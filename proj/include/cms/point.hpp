#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace cms {

// Point of a Euclidean state space.
struct EuclideanPoint {
  std::vector<double> coords;
};

// One stored symbol of a sequence-space point. Chains are immutable and
// structurally shared: appending a symbol allocates one node, so a whole
// trajectory of sequence states costs O(steps) memory.
struct SeqNode {
  int symbol;
  std::shared_ptr<const SeqNode> parent;  // next-older symbol; null at the chain root
  std::uint64_t depth;                    // symbols stored up to and including this one
};

// Point of a one-sided symbol-sequence space. `head` holds the most recent
// symbol; older positions follow parent links. Beyond the stored chain the
// sequence continues with the periodic `anchor` cycle (most recent anchor
// symbol = anchor->back()), which makes every point a fully defined infinite
// past rather than a truncation.
struct SequencePoint {
  std::shared_ptr<const SeqNode> head;                    // null: the point is the pure anchor orbit
  std::shared_ptr<const std::vector<int>> anchor;

  std::uint64_t stored_depth() const { return head ? head->depth : 0; }

  // Symbol at position -j (j = 0 is the most recent symbol).
  int symbol_at(std::uint64_t j) const;

  // Most recent symbol, resolving to the anchor when nothing is stored.
  int last_symbol() const;
};

// Sequential reader of a sequence point's past, most recent symbol first.
class SeqCursor {
 public:
  explicit SeqCursor(const SequencePoint& p)
      : node_(p.head.get()), anchor_(p.anchor.get()),
        apos_(p.anchor->size() - 1) {}

  int next();
  bool in_chain() const { return node_ != nullptr; }
  const SeqNode* node() const { return node_; }

 private:
  const SeqNode* node_;
  const std::vector<int>* anchor_;
  std::size_t apos_;
};

using Point = std::variant<EuclideanPoint, SequencePoint>;

enum class Metric { L1, L2, Linf, Seq2k };

std::string metric_name(Metric m);

// Distance under the given metric. Throws KindMismatch when the points'
// kinds, dimensions, or the metric's expected kind do not agree.
//
// Seq2k: 2^k with k <= 0 the smallest integer such that the sequences agree
// at all positions k < i <= 0; equivalently 2^-j* with j* the first
// disagreeing position counting back from the present. Equal points have
// distance 0 and a disagreement at the most recent symbol gives 1.
double distance(Metric m, const Point& p, const Point& q);

// Upper bound on the sequence-distance error from comparing only stored
// symbols: 2^-min(stored depths). With anchored points distances are exact;
// the bound certifies results that ignore anchors entirely.
double seq_distance_truncation_bound(const SequencePoint& p, const SequencePoint& q);

EuclideanPoint make_euclidean(std::vector<double> coords);

// Sequence point consisting of the periodic anchor orbit alone.
SequencePoint make_anchor_point(std::vector<int> anchor_cycle);

// p extended by one more recent symbol. Admissibility against a graph is the
// caller's contract; this is pure storage.
SequencePoint seq_append(const SequencePoint& p, int symbol);

}  // namespace cms
