#pragma once

#include <string>
#include <vector>

#include "ctlab/ladder.hpp"

namespace ctlab {

enum class Layer { ball_edges, qcsets, geodesic, electric_geodesic, electro_ambient, ladder };

std::string_view to_string(Layer layer);
// Accepts the names printed by to_string; throws ConfigError otherwise.
Layer parse_layer(std::string_view name);
std::vector<Layer> parse_layers(std::string_view comma_list);

struct RenderOptions {
    std::vector<Layer> layers;
    CurveClass curve{Letter::a};     // qcsets and electric layers
    std::string from = "ac";         // endpoints of the path layers
    std::string to = "CA";
    bool timestamp = false;          // adds a generation-time comment
};

// Poincare disk picture of the ball. Each ball edge is one <line class="edge">.
std::string render_ball(const CayleyBall& ball, const RenderOptions& opt);

// One disk per sheet, one row per block; layers ball_edges, qcsets and ladder apply.
std::string render_ladder(const ModelManifold& m, const Ladder& ladder, const RenderOptions& opt);

}  // namespace ctlab
