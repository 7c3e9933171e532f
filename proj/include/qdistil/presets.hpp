#ifndef QDISTIL_PRESETS_HPP
#define QDISTIL_PRESETS_HPP

#include <string_view>
#include <vector>

#include "qdistil/protocol.hpp"

// Built-in codes with their conventional logical bases, chosen so the derived
// encoders reproduce the historical protocols:
//   recurrence  [[2,1]]  stabilizer Z.Z,  encoder a0|00> + a1|11> (+ sector twin)
//   qpa         [[2,1]]  stabilizer Y-type XZ.XZ
//   xxxx-zzzz   [[4,2]]  stabilizers X.X.X.X and Z.Z.Z.Z
// The default protocol keeps a block only when the measurement difference is
// zero (the two-way variant used for yield comparisons).

namespace qdistil {

const std::vector<std::string>& preset_names();
bool is_preset(std::string_view name);

StabilizerCode preset_code(std::string_view name);

ConvertedProtocol preset_protocol(std::string_view name,
                                  AcceptPolicy policy = AcceptPolicy::zero_syndrome());

} // namespace qdistil

#endif
