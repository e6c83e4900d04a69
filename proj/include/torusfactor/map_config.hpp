#ifndef TORUSFACTOR_MAP_CONFIG_HPP
#define TORUSFACTOR_MAP_CONFIG_HPP

#include <optional>
#include <string>

#include "torusfactor/circle_maps.hpp"
#include "torusfactor/torus_maps.hpp"

namespace torusfactor {

// Map definitions as JSON text.
//   circle: {"kind":"rigid","alpha":a}
//           {"kind":"denjoy","alpha":"golden"|"sqrt2m1"|a,"order":N,"mass":m}
//           {"kind":"piecewise","knots":[[x,y],...]}
//   torus:  {"kind":"rigid","alpha":a,"beta":b,"k":0}
//           {"kind":"dehn","k":k}
//           {"kind":"product"|"suspension","g1":circle,"g2":circle}
//           {"kind":"disk-push","center0":[x,y],"center1":[x,y],"radius":r}
//           {"kind":"composed","defs":{name:torus,...},"chain":[name or torus,...]}
//           {"kind":"gallery","id":"3.2"|"3.3"|"rigid-suspension"}

struct MapDefinition {
    TorusMap map = TorusMap::rigid(0.0, 0.0);
    std::string canonical;  // compact JSON with sorted keys
    std::optional<Vec2> rotation_target;
};

CircleLift parse_circle(const std::string& json_text);
MapDefinition parse_map(const std::string& json_text);

}  // namespace torusfactor

#endif
