#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ctlab/electro.hpp"
#include "ctlab/twist.hpp"

namespace ctlab {

/// Gluing maps allowed on thick blocks.
enum class Glue : std::uint8_t { identity, tw_a, tw_a_inv, tw_c, tw_c_inv };

std::string_view to_string(Glue g);
Glue parse_glue(std::string_view text);  // "id", "tw_a", "tw_a^-1", "tw_c", "tw_c^-1"; throws ConfigError
TwistMap glue_twist(Glue g);             // identity is the twist with n = 0

struct ThickBlockSpec {
    Glue glue = Glue::identity;
};

struct ThinBlockSpec {
    CurveClass curve;
    int n = 1;  // twist coefficient, nonzero
};

using BlockSpec = std::variant<ThickBlockSpec, ThinBlockSpec>;

std::string describe(const BlockSpec& spec);
// JSON array of {"kind": "thick", "glue": ...} / {"kind": "thin", "curve": ..., "n": ...}.
std::vector<BlockSpec> parse_stack(std::string_view json_text);
std::string stack_to_json(const std::vector<BlockSpec>& specs);

enum class EdgeKind : std::uint8_t { horizontal, vertical, twist, glue };
std::string_view to_string(EdgeKind k);

struct SheetInfo {
    int block = 0;       // lowest block containing the sheet
    int level = 0;       // level within that block
    bool electric = false;
    CurveClass curve;    // meaningful on electric sheets
};

class ModelManifold;

/// The assembled model as a weighted graph. With `electrocuted` false every
/// horizontal edge weighs 1.
struct ModelGraph {
    const ModelManifold* model;
    bool electrocuted = true;

    std::size_t size() const;
    template <class F>
    void for_each_edge(VertexId u, F&& f) const;
};

/// Stack of thick and thin blocks glued sheet to sheet.
///
/// Global vertex ids are sheet * |ball| + ball vertex. The top sheet of block i
/// is the bottom sheet of block i + 1.
class ModelManifold {
public:
    static ModelManifold assemble(const CayleyBall& ball, std::vector<BlockSpec> specs, int jobs = 1);

    const CayleyBall& ball() const { return *ball_; }
    const std::vector<BlockSpec>& specs() const { return specs_; }
    int block_count() const { return static_cast<int>(specs_.size()); }
    int sheet_count() const { return static_cast<int>(sheets_.size()); }
    const SheetInfo& sheet(int s) const { return sheets_[s]; }
    int bottom_sheet(int block) const { return base_[block]; }
    int top_sheet(int block) const { return base_[block + 1]; }
    int sheet_at(int block, int level) const { return base_[block] + level; }
    int levels(int block) const { return base_[block + 1] - base_[block] + 1; }
    bool is_thin(int block) const { return std::holds_alternative<ThinBlockSpec>(specs_[block]); }

    std::size_t size() const { return sheets_.size() * n_; }
    VertexId global(int sheet, VertexId v) const { return static_cast<VertexId>(sheet * n_ + v); }
    int sheet_of(VertexId g) const { return static_cast<int>(g / n_); }
    VertexId local(VertexId g) const { return static_cast<VertexId>(g % n_); }
    VertexId reference_point() const { return global(0, 0); }

    // Vertical neighbour of (sheet, v) one sheet up or down; kNoVertex if undefined.
    VertexId up(int sheet, VertexId v) const {
        const auto& m = gaps_[sheet].up;
        return m.empty() ? v : m[v];
    }
    VertexId down(int sheet, VertexId v) const {
        const auto& m = gaps_[sheet - 1].down;
        return m.empty() ? v : m[v];
    }
    // Kind of the edges joining `sheet` and `sheet + 1`.
    EdgeKind gap_kind(int sheet) const { return gaps_[sheet].kind; }
    // The vertical map across a gap, empty when it is the identity.
    const VertexMap& gap_map(int sheet) const { return gaps_[sheet].up; }

    const ElectricSpace& electric(CurveClass c) const;
    // Lipschitz bound of a thick block's glue: max word length of a generator image.
    int glue_distortion(int block) const;

    ModelGraph graph(bool electrocuted = true) const { return ModelGraph{this, electrocuted}; }

    void save(const std::filesystem::path& file) const;
    // Loads maps cached by save() for the same stack; throws Error on any mismatch.
    static ModelManifold load(const CayleyBall& ball, const std::vector<BlockSpec>& specs,
                              const std::filesystem::path& file);
    static ModelManifold load_or_build(const CayleyBall& ball, const std::vector<BlockSpec>& specs,
                                       const std::filesystem::path& dir, int jobs = 1, bool* rebuilt = nullptr);
    static std::filesystem::path cache_file(const std::filesystem::path& dir, const CayleyBall& ball,
                                            const std::vector<BlockSpec>& specs);

    bool operator==(const ModelManifold& other) const;

private:
    struct Gap {
        EdgeKind kind = EdgeKind::vertical;
        VertexMap up;    // empty: identity
        VertexMap down;
    };
    ModelManifold(const CayleyBall& ball, std::vector<BlockSpec> specs);
    void layout();
    void attach_electric();

    const CayleyBall* ball_;
    std::vector<BlockSpec> specs_;
    std::size_t n_ = 0;
    std::vector<SheetInfo> sheets_;
    std::vector<int> base_;
    std::vector<Gap> gaps_;
    std::shared_ptr<const ElectricSpace> es_a_, es_c_;
};

inline std::size_t ModelGraph::size() const { return model->size(); }

template <class F>
void ModelGraph::for_each_edge(VertexId u, F&& f) const {
    const int s = model->sheet_of(u);
    const VertexId v = model->local(u);
    const SheetInfo& info = model->sheet(s);
    const auto& nb = model->ball().neighbors(v);
    const VertexId base = model->global(s, 0);
    const bool zero = electrocuted && info.electric;
    for (int i = 0; i < kLetterCount; ++i) {
        if (nb[i] == kNoVertex) continue;
        const Letter g = letter_at(i);
        const bool sigma = zero && (g == info.curve.sigma || g == inverse(info.curve.sigma));
        f(base + nb[i], sigma ? 0 : 1);
    }
    if (s > 0) {
        const VertexId w = model->down(s, v);
        if (w != kNoVertex) f(model->global(s - 1, w), 1);
    }
    if (s + 1 < model->sheet_count()) {
        const VertexId w = model->up(s, v);
        if (w != kNoVertex) f(model->global(s + 1, w), 1);
    }
}

int model_dist(const ModelManifold& m, VertexId x, VertexId y, bool electrocuted = true);

// Diameter in the model of one Margulis tube lift: the set on level 1 of a thin
// block together with its twist image on level 2.
int tube_diameter(const ModelManifold& m, int block, SetId set);

}  // namespace ctlab
