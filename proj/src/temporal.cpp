#include "evrel/temporal.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <tuple>

#include "evrel/error.hpp"

namespace evrel {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kUnannotated: return "unannotated";
    case Provenance::kDirect: return "direct";
    case Provenance::kInferred: return "inferred";
  }
  return "unannotated";
}

namespace {

constexpr TemporalLabel label_at_bit(unsigned bit) { return static_cast<TemporalLabel>(bit); }

template <typename F>
void for_each_label(LabelMask mask, F&& f) {
  for (unsigned bit = 0; bit < 3; ++bit) {
    if (mask & (1u << bit)) f(label_at_bit(bit));
  }
}

}  // namespace

RelationMatrix::RelationMatrix(std::vector<std::string> mention_ids) : ids_(std::move(mention_ids)) {
  std::set<std::string_view> unique(ids_.begin(), ids_.end());
  if (unique.size() != ids_.size()) throw Error(ErrorCode::kUsage, "duplicate mention id in matrix");
  cells_.resize(pair_count());
  known_.assign(pair_count(), 0);
  derivations_.assign(pair_count(), {});
}

std::optional<std::size_t> RelationMatrix::index_of(std::string_view id) const {
  auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

std::size_t RelationMatrix::require_index(std::string_view id) const {
  auto index = index_of(id);
  if (!index) throw Error(ErrorCode::kNotFound, "mention not in relation matrix: " + std::string(id), {std::string(id)});
  return *index;
}

PairKey RelationMatrix::key(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  return {ids_.at(i), ids_.at(j)};
}

void RelationMatrix::check_pair(std::size_t a, std::size_t b) const {
  if (a == b || a >= size() || b >= size()) {
    throw Error(ErrorCode::kNotFound,
                "unknown pair (" + std::to_string(a) + ", " + std::to_string(b) + ")");
  }
}

const CellState& RelationMatrix::cell(const PairKey& pair) const {
  std::size_t i = require_index(pair.first);
  std::size_t j = require_index(pair.second);
  if (i >= j) throw Error(ErrorCode::kUsage, "pair key is not in canonical order");
  return cell(i, j);
}

std::optional<TemporalLabel> RelationMatrix::label(std::size_t a, std::size_t b) const {
  check_pair(a, b);
  const CellState& c = a < b ? cell(a, b) : cell(b, a);
  if (!c.annotated()) return std::nullopt;
  return a < b ? c.label : invert(c.label);
}

std::optional<TemporalLabel> RelationMatrix::label(std::string_view a, std::string_view b) const {
  return label(require_index(a), require_index(b));
}

LabelMask RelationMatrix::knowledge(std::size_t a, std::size_t b) const {
  return a < b ? known_[slot(a, b)] : invert_mask(known_[slot(b, a)]);
}

void RelationMatrix::set_direct(std::size_t i, std::size_t j, TemporalLabel label) {
  check_pair(i, j);
  if (i > j) {
    std::swap(i, j);
    label = invert(label);
  }
  cells_[slot(i, j)] = CellState{Provenance::kDirect, label, {}};
}

std::vector<std::tuple<std::size_t, std::size_t, TemporalLabel>> RelationMatrix::direct_cells() const {
  std::vector<std::tuple<std::size_t, std::size_t, TemporalLabel>> out;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) {
      const auto& c = cell(i, j);
      if (c.provenance == Provenance::kDirect) out.emplace_back(i, j, c.label);
    }
  }
  return out;
}

const RelationMatrix::Derivation& RelationMatrix::derivation(std::size_t i, std::size_t j,
                                                             TemporalLabel label) const {
  return derivations_[slot(i, j)][static_cast<unsigned>(label)];
}

std::size_t RelationMatrix::walk_length(std::size_t a, std::size_t b, TemporalLabel label) const {
  return a < b ? derivation(a, b, label).length : derivation(b, a, invert(label)).length;
}

// Appends the nodes after `a` of the recorded walk a -> ... -> b.
void RelationMatrix::append_walk(std::size_t a, std::size_t b, TemporalLabel label,
                                 std::vector<std::size_t>& nodes) const {
  if (a > b) {
    std::vector<std::size_t> reversed{b};
    append_walk(b, a, invert(label), reversed);
    // reversed = b ... a; emit it backwards without the leading a
    for (auto it = reversed.rbegin() + 1; it != reversed.rend(); ++it) nodes.push_back(*it);
    return;
  }
  const Derivation& d = derivation(a, b, label);
  if (d.length <= 1) {
    nodes.push_back(b);
    return;
  }
  append_walk(a, d.mediator, d.leg_ik, nodes);
  append_walk(d.mediator, b, d.leg_kj, nodes);
}

std::vector<std::string> RelationMatrix::walk_ids(std::size_t a, std::size_t k, std::size_t b,
                                                  TemporalLabel ik, TemporalLabel kj) const {
  std::vector<std::size_t> nodes{a};
  append_walk(a, k, ik, nodes);
  append_walk(k, b, kj, nodes);
  std::vector<std::string> out;
  out.reserve(nodes.size());
  for (auto n : nodes) out.push_back(ids_[n]);
  return out;
}

void RelationMatrix::recompute_closure() {
  const std::size_t n = size();
  std::fill(known_.begin(), known_.end(), LabelMask{0});
  std::fill(derivations_.begin(), derivations_.end(), std::array<Derivation, 3>{});
  for (std::size_t s = 0; s < cells_.size(); ++s) {
    CellState& c = cells_[s];
    if (c.provenance == Provenance::kDirect) {
      if (is_definite(c.label)) {
        known_[s] = mask_of(c.label);
        derivations_[s][static_cast<unsigned>(c.label)].length = 1;
      }
    } else {
      c = CellState{};
    }
  }

  // Warshall-style sweeps with the mediator in the outer loop, repeated until
  // neither a label set grows nor a shorter derivation is found.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        if (i == k) continue;
        const LabelMask ik_mask = knowledge(i, k);
        if (ik_mask == 0) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
          if (j == k) continue;
          const LabelMask kj_mask = knowledge(k, j);
          if (kj_mask == 0) continue;
          const std::size_t s = slot(i, j);
          for_each_label(ik_mask, [&](TemporalLabel a) {
            for_each_label(kj_mask, [&](TemporalLabel b) {
              const Composed c = compose(a, b);
              if (!c) return;
              const std::size_t length = walk_length(i, k, a) + walk_length(k, j, b);
              Derivation& d = derivations_[s][static_cast<unsigned>(*c)];
              if (d.length == 0 || length < d.length) {
                d = Derivation{length, k, a, b};
                known_[s] |= mask_of(*c);
                changed = true;
              }
            });
          });
        }
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t s = slot(i, j);
      CellState& c = cells_[s];
      if (c.provenance == Provenance::kDirect || std::popcount(known_[s]) != 1) continue;
      const auto bit = static_cast<unsigned>(std::countr_zero(known_[s]));
      const TemporalLabel inferred = label_at_bit(bit);
      const Derivation& d = derivations_[s][bit];
      auto walk = walk_ids(i, d.mediator, j, d.leg_ik, d.leg_kj);
      c.provenance = Provenance::kInferred;
      c.label = inferred;
      c.witness.assign(walk.begin() + 1, walk.end() - 1);
    }
  }
}

std::vector<ConflictWitness> RelationMatrix::detect_conflicts() const {
  std::vector<ConflictWitness> out;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const CellState& target = cell(i, j);
      const LabelMask target_known = known_[slot(i, j)];
      const bool direct = target.provenance == Provenance::kDirect;
      const bool contested = !direct && std::popcount(target_known) >= 2;
      if (!direct && !contested) continue;

      const std::size_t first = out.size();
      auto emit = [&](std::size_t k, TemporalLabel a, TemporalLabel b, TemporalLabel c) {
        ConflictWitness w;
        w.kind = direct ? ConflictKind::kDirectContradiction : ConflictKind::kPathDisagreement;
        w.pair = key(i, j);
        w.mediator = ids_[k];
        if (direct) w.direct_label = target.label;
        w.composed_label = c;
        w.leg_ik = a;
        w.leg_kj = b;
        w.leg_ik_state = i < k ? cell(i, k) : cell(k, i);
        w.leg_kj_state = k < j ? cell(k, j) : cell(j, k);
        if (contested) {
          for_each_label(target_known & ~mask_of(c), [&](TemporalLabel r) { w.rival_labels.push_back(r); });
        }
        w.path = walk_ids(i, k, j, a, b);
        out.push_back(std::move(w));
      };

      // Triples whose legs carry a resolved label come first.
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const auto a = label(i, k);
        const auto b = label(k, j);
        if (!a || !b) continue;
        const Composed c = compose(*a, *b);
        if (!c || (direct && *c == target.label)) continue;
        emit(k, *a, *b, *c);
      }
      if (out.size() > first) continue;

      // Otherwise the disagreement lives on contested legs; explain it with
      // the derivable leg labels.
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        LabelMask reported = 0;
        for_each_label(knowledge(i, k), [&](TemporalLabel a) {
          for_each_label(knowledge(k, j), [&](TemporalLabel b) {
            const Composed c = compose(a, b);
            if (!c || (reported & mask_of(*c))) return;
            if (direct && *c == target.label) return;
            reported |= mask_of(*c);
            emit(k, a, b, *c);
          });
        });
      }
    }
  }
  return out;
}

AnnotationDelta RelationMatrix::apply_annotation(std::size_t a, std::size_t b, TemporalLabel label) {
  check_pair(a, b);
  std::vector<Provenance> before;
  before.reserve(cells_.size());
  for (const auto& c : cells_) before.push_back(c.provenance);

  AnnotationDelta delta;
  delta.previous = a < b ? cell(a, b) : cell(b, a);
  set_direct(a, b, label);
  recompute_closure();
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) {
      const std::size_t s = slot(i, j);
      if (cells_[s].provenance == Provenance::kInferred && before[s] != Provenance::kInferred) {
        delta.inferred.push_back(key(i, j));
      }
    }
  }
  delta.conflicts = detect_conflicts();
  return delta;
}

AnnotationDelta RelationMatrix::apply_annotation(std::string_view a, std::string_view b,
                                                 TemporalLabel label) {
  return apply_annotation(require_index(a), require_index(b), label);
}

std::optional<std::pair<std::size_t, std::size_t>> RelationMatrix::next_pair() const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (cell(i, j).annotated()) continue;
      // (i, j) is the first unannotated pair; scan back for the latest first
      // node that still has an open pair with j.
      for (std::size_t last = j; last-- > i;) {
        if (!cell(last, j).annotated()) return std::pair{last, j};
      }
    }
  }
  return std::nullopt;
}

CompletionStatus RelationMatrix::completion_status() const {
  CompletionStatus status;
  for (const auto& c : cells_) {
    switch (c.provenance) {
      case Provenance::kDirect: ++status.direct_pairs; break;
      case Provenance::kInferred: ++status.inferred_pairs; break;
      case Provenance::kUnannotated: ++status.unannotated_pairs; break;
    }
  }
  status.resolved_pairs = status.direct_pairs + status.inferred_pairs;
  status.conflicts = detect_conflicts().size();
  status.complete = status.unannotated_pairs == 0 && status.conflicts == 0;
  return status;
}

}  // namespace evrel
