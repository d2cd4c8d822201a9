#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "evrel/document.hpp"
#include "evrel/labels.hpp"

namespace evrel {

enum class Provenance { kUnannotated, kDirect, kInferred };

std::string_view to_string(Provenance p);

struct CellState {
  Provenance provenance = Provenance::kUnannotated;
  TemporalLabel label = TemporalLabel::kVague;  // meaningful unless unannotated
  // Inferred only: intermediate mentions i -> m1 -> ... -> j; folding compose
  // over the direct labels along this walk yields `label`.
  std::vector<std::string> witness;

  bool annotated() const { return provenance != Provenance::kUnannotated; }
  bool operator==(const CellState&) const = default;
};

enum class ConflictKind {
  kDirectContradiction,  // stored direct label differs from a composed one
  kPathDisagreement,     // unannotated pair, two mediators imply different labels
};

struct ConflictWitness {
  ConflictKind kind = ConflictKind::kDirectContradiction;
  PairKey pair;
  std::string mediator;
  std::optional<TemporalLabel> direct_label;  // empty for path disagreement
  TemporalLabel composed_label = TemporalLabel::kBefore;
  // Labels the two legs contributed, oriented i->k and k->j.
  TemporalLabel leg_ik = TemporalLabel::kBefore;
  TemporalLabel leg_kj = TemporalLabel::kBefore;
  CellState leg_ik_state;
  CellState leg_kj_state;
  // For path disagreement: the other labels derivable for the pair.
  std::vector<TemporalLabel> rival_labels;
  // Full walk over direct cells from pair.first to pair.second through the
  // mediator, endpoints included.
  std::vector<std::string> path;

  bool operator==(const ConflictWitness&) const = default;
};

struct CompletionStatus {
  std::size_t resolved_pairs = 0;
  std::size_t direct_pairs = 0;
  std::size_t inferred_pairs = 0;
  std::size_t unannotated_pairs = 0;
  std::size_t conflicts = 0;
  bool complete = false;
};

struct AnnotationDelta {
  std::vector<PairKey> inferred;  // cells that became inferred with this edit
  std::vector<ConflictWitness> conflicts;
  CellState previous;
};

// Pair-relation store over the included mentions of a document, in text
// order. Only the upper triangle is stored; reading (b, a) inverts (a, b).
//
// Direct cells are the only primary state. recompute_closure derives every
// other cell from them: for each pair it collects the set of definite labels
// reachable by composing direct labels along walks, and marks the pair
// inferred when that set holds exactly one label. A pair with two or more
// derivable labels stays unannotated and is reported by detect_conflicts.
class RelationMatrix {
 public:
  RelationMatrix() = default;
  explicit RelationMatrix(std::vector<std::string> mention_ids);

  std::size_t size() const { return ids_.size(); }
  std::size_t pair_count() const { return ids_.empty() ? 0 : ids_.size() * (ids_.size() - 1) / 2; }
  const std::vector<std::string>& mention_ids() const { return ids_; }

  std::optional<std::size_t> index_of(std::string_view id) const;
  std::size_t require_index(std::string_view id) const;
  PairKey key(std::size_t i, std::size_t j) const;

  // i < j
  const CellState& cell(std::size_t i, std::size_t j) const { return cells_[slot(i, j)]; }
  const CellState& cell(const PairKey& key) const;

  // Resolved label of a read in the (a, b) orientation; empty if unannotated.
  std::optional<TemporalLabel> label(std::size_t a, std::size_t b) const;
  std::optional<TemporalLabel> label(std::string_view a, std::string_view b) const;

  // Sets the cell to a direct label without running the closure.
  void set_direct(std::size_t i, std::size_t j, TemporalLabel label);

  // Sets a direct label in the (a, b) orientation, then recomputes the
  // closure and collects conflicts.
  AnnotationDelta apply_annotation(std::size_t a, std::size_t b, TemporalLabel label);
  AnnotationDelta apply_annotation(std::string_view a, std::string_view b, TemporalLabel label);

  void recompute_closure();
  std::vector<ConflictWitness> detect_conflicts() const;

  // Next pair to present: the first unannotated pair in text order fixes the
  // second node; among unannotated pairs sharing that node the one with the
  // latest first node is returned.
  std::optional<std::pair<std::size_t, std::size_t>> next_pair() const;

  CompletionStatus completion_status() const;

  // Derivable definite labels for (a, b), oriented. Includes a direct label.
  LabelMask knowledge(std::size_t a, std::size_t b) const;

  // Direct cells only, as (i, j, label) with i < j.
  std::vector<std::tuple<std::size_t, std::size_t, TemporalLabel>> direct_cells() const;

  bool operator==(const RelationMatrix& other) const {
    return ids_ == other.ids_ && cells_ == other.cells_;
  }

 private:
  struct Derivation {
    std::size_t length = 0;   // 0: label not derivable; 1: direct edge
    std::size_t mediator = 0;
    TemporalLabel leg_ik = TemporalLabel::kVague;
    TemporalLabel leg_kj = TemporalLabel::kVague;
  };

  std::size_t slot(std::size_t i, std::size_t j) const {
    // row-major upper triangle without the diagonal
    return i * ids_.size() - i * (i + 1) / 2 + (j - i - 1);
  }
  void check_pair(std::size_t a, std::size_t b) const;
  const Derivation& derivation(std::size_t i, std::size_t j, TemporalLabel label) const;
  std::size_t walk_length(std::size_t a, std::size_t b, TemporalLabel label) const;
  void append_walk(std::size_t a, std::size_t b, TemporalLabel label,
                   std::vector<std::size_t>& nodes) const;
  std::vector<std::string> walk_ids(std::size_t a, std::size_t k, std::size_t b, TemporalLabel ik,
                                    TemporalLabel kj) const;

  std::vector<std::string> ids_;
  std::vector<CellState> cells_;
  // Derived by recompute_closure, canonical orientation.
  std::vector<LabelMask> known_;
  std::vector<std::array<Derivation, 3>> derivations_;
};

}  // namespace evrel
