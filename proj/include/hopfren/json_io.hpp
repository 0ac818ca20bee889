#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "hopfren/character.hpp"
#include "hopfren/graph.hpp"
#include "hopfren/hopf.hpp"
#include "hopfren/laurent.hpp"
#include "hopfren/spectral.hpp"

namespace hopfren {

using Json = nlohmann::json;

// graph <-> {"vertices": [...], "edges": [[a,b],...]} plus derived summary
// fields (label, loops, automorphisms, ...) on output
Json graph_to_json(const FeynmanGraph& g);
// accepts either explicit vertex/edge lists or {"fixture": "bubble"|"triangle"|
// "nested_two_loop"|"single_vertex_tree"}
FeynmanGraph graph_from_json(const Json& j);

Json series_to_json(const LaurentSeries& s);
LaurentSeries series_from_json(const Json& j);

Json character_to_json(const Character& c,
                       const std::map<std::string, std::string>* names = nullptr);
Character character_from_json(const Json& j);

Json polynomial_to_json(const HopfPolynomial& p,
                        const std::map<std::string, std::string>* names = nullptr);

// {"kind": "circle"|"torus", "radius"/"periods", "mass", "cutoff"}
SpectralBackend backend_from_json(const Json& j);
Json backend_to_json(const SpectralBackend& b);

}  // namespace hopfren
