#pragma once

#include <string>
#include <string_view>

#include "phytoken/plant.hpp"

namespace phytoken {

// Reads a plant document in the canonical schema:
//
//   <plant age base_x base_y base_z>
//     <shoot id order parent_node type pitch yaw roll>
//       <phytomer>
//         <internode length radius pitch phyllotactic/>
//         <petiole length radius pitch curvature leaflet_scale>
//           <leaf pos scale pitch yaw roll/>
//         </petiole>
//         <shoot ...>...</shoot>      child shoots growing from this node
//       </phytomer>
//     </shoot>
//   </plant>
//
// Throws XmlParseError for malformed XML and ValidationError for schema or
// invariant violations.
PlantDoc parse_xml(std::string_view text);

// Canonical text: fixed element order (internode, first petiole, child shoots,
// remaining petioles), two-space indentation, shortest round-trip decimals.
std::string serialize_xml(const PlantDoc& doc);

// Shortest decimal that parses back to exactly `value`, in fixed notation for
// magnitudes in [1e-6, 1e16) and scientific otherwise. Always contains a '.'
// or an exponent so it reads as a float ("-125.0", "0.0004", "1e-07").
std::string format_decimal(double value);

}  // namespace phytoken
