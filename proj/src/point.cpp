#include "cms/point.hpp"

#include <cmath>
#include <numeric>

#include "cms/errors.hpp"

namespace cms {

int SequencePoint::symbol_at(std::uint64_t j) const {
  const SeqNode* n = head.get();
  while (n && j > 0) {
    n = n->parent.get();
    --j;
  }
  if (n) return n->symbol;
  // Into the anchor: position j steps beyond the stored chain, counted from
  // the anchor's most recent symbol backwards.
  std::size_t len = anchor->size();
  std::size_t back = static_cast<std::size_t>(j % len);
  return (*anchor)[(len - 1 + len - back) % len];
}

int SequencePoint::last_symbol() const { return head ? head->symbol : anchor->back(); }

int SeqCursor::next() {
  if (node_) {
    int s = node_->symbol;
    node_ = node_->parent.get();
    return s;
  }
  int s = (*anchor_)[apos_];
  apos_ = (apos_ == 0) ? anchor_->size() - 1 : apos_ - 1;
  return s;
}

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::L1: return "l1";
    case Metric::L2: return "l2";
    case Metric::Linf: return "linf";
    case Metric::Seq2k: return "seq2k";
  }
  return "?";
}

namespace {

double euclidean_distance(Metric m, const EuclideanPoint& p, const EuclideanPoint& q) {
  if (p.coords.size() != q.coords.size())
    throw KindMismatch("dimension mismatch: " + std::to_string(p.coords.size()) + " vs " +
                       std::to_string(q.coords.size()));
  double acc = 0.0;
  switch (m) {
    case Metric::L1:
      for (std::size_t i = 0; i < p.coords.size(); ++i) acc += std::fabs(p.coords[i] - q.coords[i]);
      return acc;
    case Metric::L2:
      for (std::size_t i = 0; i < p.coords.size(); ++i) {
        double d = p.coords[i] - q.coords[i];
        acc += d * d;
      }
      return std::sqrt(acc);
    case Metric::Linf:
      for (std::size_t i = 0; i < p.coords.size(); ++i)
        acc = std::max(acc, std::fabs(p.coords[i] - q.coords[i]));
      return acc;
    default:
      throw KindMismatch("sequence metric applied to Euclidean points");
  }
}

double sequence_distance(const SequencePoint& p, const SequencePoint& q) {
  SeqCursor cp(p), cq(q);
  bool anchors_equal = p.anchor == q.anchor || *p.anchor == *q.anchor;
  // Both sequences are eventually periodic, so agreement up to
  // max(stored depths) + lcm(anchor lengths) implies agreement everywhere.
  std::uint64_t lcm = std::lcm<std::uint64_t>(p.anchor->size(), q.anchor->size());
  std::uint64_t limit = std::max(p.stored_depth(), q.stored_depth()) + lcm;
  for (std::uint64_t j = 0; j < limit; ++j) {
    // Shared chain suffix with matching anchors: identical from here on.
    if (anchors_equal && cp.in_chain() && cp.node() == cq.node()) return 0.0;
    if (cp.next() != cq.next()) return std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(j, 4000)));
  }
  return 0.0;
}

}  // namespace

double distance(Metric m, const Point& p, const Point& q) {
  if (p.index() != q.index())
    throw KindMismatch("distance between points of different kinds");
  if (std::holds_alternative<EuclideanPoint>(p)) {
    return euclidean_distance(m, std::get<EuclideanPoint>(p), std::get<EuclideanPoint>(q));
  }
  if (m != Metric::Seq2k) throw KindMismatch("Euclidean metric applied to sequence points");
  return sequence_distance(std::get<SequencePoint>(p), std::get<SequencePoint>(q));
}

double seq_distance_truncation_bound(const SequencePoint& p, const SequencePoint& q) {
  std::uint64_t d = std::min(p.stored_depth(), q.stored_depth());
  return std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(d, 4000)));
}

EuclideanPoint make_euclidean(std::vector<double> coords) {
  if (coords.empty()) throw InvalidParams("Euclidean point needs at least one coordinate");
  return EuclideanPoint{std::move(coords)};
}

SequencePoint make_anchor_point(std::vector<int> anchor_cycle) {
  if (anchor_cycle.empty()) throw InvalidParams("anchor cycle must be nonempty");
  return SequencePoint{nullptr, std::make_shared<const std::vector<int>>(std::move(anchor_cycle))};
}

SequencePoint seq_append(const SequencePoint& p, int symbol) {
  auto node = std::make_shared<const SeqNode>(SeqNode{symbol, p.head, p.stored_depth() + 1});
  return SequencePoint{std::move(node), p.anchor};
}

}  // namespace cms
