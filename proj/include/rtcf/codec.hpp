#pragma once

// JSON encodings shared by transcripts and the wire protocol. Z_q values travel as decimal
// strings, bit strings as arrays of 0/1.

#include "rtcf/params.hpp"
#include "rtcf/protocol_q.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace rtcf {

using json = nlohmann::json;

struct CodecError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

json zq_to_json(std::uint64_t x);
std::uint64_t zq_from_json(const json& j, const Modulus& mod);

json vec_to_json(const ZqVec& v);
ZqVec vec_from_json(const json& j, const Modulus& mod, Eigen::Index expected);

/// Row-major array of rows.
json mat_to_json(const ZqMat& A);
ZqMat mat_from_json(const json& j, const Modulus& mod, Eigen::Index rows, Eigen::Index cols);

json bits_to_json(const BitString& b);
BitString bits_from_json(const json& j, Eigen::Index expected);

/// Rows of a 0/1 matrix packed as little-endian hex strings.
json bitmat_to_hex(const BitMat& N);
BitMat bitmat_from_hex(const json& j, Eigen::Index rows, Eigen::Index cols);

int bit_from_json(const json& j);

json params_to_json(const Params& p);
Params params_from_json(const json& j);

json msg1_to_json(const Msg1& m);
Msg1 msg1_from_json(const json& j, const Params& p);

json msg2_to_json(const Msg2& m);
Msg2 msg2_from_json(const json& j, const Params& p);

}  // namespace rtcf
