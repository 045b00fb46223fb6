#include "rtcf/codec.hpp"

#include <charconv>

namespace rtcf {

namespace {

void expect(bool ok, const std::string& what)
{
    if (!ok) throw CodecError(what);
}

}  // namespace

json zq_to_json(std::uint64_t x) { return std::to_string(x); }

std::uint64_t zq_from_json(const json& j, const Modulus& mod)
{
    expect(j.is_string(), "Z_q value must be a decimal string");
    const std::string& s = j.get_ref<const std::string&>();
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    expect(!s.empty() && ec == std::errc{} && ptr == s.data() + s.size(), "malformed Z_q value '" + s + "'");
    expect(x < mod.value(), "Z_q value out of range: " + s);
    return x;
}

json vec_to_json(const ZqVec& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(zq_to_json(v(i)));
    return out;
}

ZqVec vec_from_json(const json& j, const Modulus& mod, Eigen::Index expected)
{
    expect(j.is_array(), "vector must be an array");
    expect(expected < 0 || static_cast<Eigen::Index>(j.size()) == expected,
           "vector has length " + std::to_string(j.size()) + ", expected " + std::to_string(expected));
    ZqVec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = zq_from_json(j[i], mod);
    return v;
}

json mat_to_json(const ZqMat& A)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < A.rows(); ++i) out.push_back(vec_to_json(A.row(i).transpose()));
    return out;
}

ZqMat mat_from_json(const json& j, const Modulus& mod, Eigen::Index rows, Eigen::Index cols)
{
    expect(j.is_array() && static_cast<Eigen::Index>(j.size()) == rows, "matrix has the wrong number of rows");
    ZqMat A(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) A.row(i) = vec_from_json(j[static_cast<std::size_t>(i)], mod, cols).transpose();
    return A;
}

json bits_to_json(const BitString& b)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < b.size(); ++i) out.push_back(static_cast<int>(b(i)));
    return out;
}

BitString bits_from_json(const json& j, Eigen::Index expected)
{
    expect(j.is_array(), "bit string must be an array");
    expect(expected < 0 || static_cast<Eigen::Index>(j.size()) == expected,
           "bit string has length " + std::to_string(j.size()) + ", expected " + std::to_string(expected));
    BitString b(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) b(static_cast<Eigen::Index>(i)) = static_cast<std::uint8_t>(bit_from_json(j[i]));
    return b;
}

json bitmat_to_hex(const BitMat& N)
{
    static const char* digits = "0123456789abcdef";
    json out = json::array();
    for (Eigen::Index i = 0; i < N.rows(); ++i) {
        std::string row;
        for (Eigen::Index j = 0; j < N.cols(); j += 4) {
            int nibble = 0;
            for (int k = 0; k < 4 && j + k < N.cols(); ++k) nibble |= (N(i, j + k) & 1) << k;
            row.push_back(digits[nibble]);
        }
        out.push_back(row);
    }
    return out;
}

BitMat bitmat_from_hex(const json& j, Eigen::Index rows, Eigen::Index cols)
{
    expect(j.is_array() && static_cast<Eigen::Index>(j.size()) == rows, "bit matrix has the wrong number of rows");
    BitMat N(rows, cols);
    const std::size_t width = static_cast<std::size_t>((cols + 3) / 4);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& r = j[static_cast<std::size_t>(i)];
        expect(r.is_string() && r.get_ref<const std::string&>().size() == width, "bit matrix row has the wrong width");
        const std::string& s = r.get_ref<const std::string&>();
        for (std::size_t c = 0; c < width; ++c) {
            const char ch = s[c];
            int nibble = 0;
            if (ch >= '0' && ch <= '9') nibble = ch - '0';
            else if (ch >= 'a' && ch <= 'f') nibble = ch - 'a' + 10;
            else throw CodecError("bit matrix row is not lowercase hex");
            for (int k = 0; k < 4; ++k) {
                const Eigen::Index col = static_cast<Eigen::Index>(c) * 4 + k;
                if (col < cols) N(i, col) = static_cast<std::uint8_t>((nibble >> k) & 1);
                else expect(((nibble >> k) & 1) == 0, "bit matrix row has padding bits set");
            }
        }
    }
    return N;
}

int bit_from_json(const json& j)
{
    expect(j.is_number_integer(), "bit must be 0 or 1");
    const auto b = j.get<std::int64_t>();
    expect(b == 0 || b == 1, "bit must be 0 or 1");
    return static_cast<int>(b);
}

json params_to_json(const Params& p)
{
    return json{{"name", p.preset()}, {"n", p.n()}, {"sigma", p.sigma()}, {"q", zq_to_json(p.q())}};
}

Params params_from_json(const json& j)
{
    try {
        const std::string name = j.at("name").get<std::string>();
        const auto n = j.at("n").get<Eigen::Index>();
        const double sigma = j.at("sigma").get<double>();
        const std::string& qs = j.at("q").get_ref<const std::string&>();
        std::uint64_t q = 0;
        const auto [ptr, ec] = std::from_chars(qs.data(), qs.data() + qs.size(), q);
        expect(ec == std::errc{} && ptr == qs.data() + qs.size(), "malformed modulus");
        if (name == "desk" || name == "toy") {
            Params preset = preset_by_name(name);
            if (preset.n() == n && preset.sigma() == sigma && preset.q() == q) return preset;
        }
        return Params::make(name, n, sigma, q);
    } catch (const json::exception& e) {
        throw CodecError(std::string("malformed parameter block: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw CodecError(std::string("invalid parameters: ") + e.what());
    }
}

json msg1_to_json(const Msg1& m)
{
    return json{{"pk", {{"A", mat_to_json(m.pk.A)}, {"v", vec_to_json(m.pk.v)}}},
                {"ct", {{"a", vec_to_json(m.ct.a)}, {"w", zq_to_json(m.ct.w)}}}};
}

Msg1 msg1_from_json(const json& j, const Params& p)
{
    try {
        const Modulus& mod = p.mod();
        Msg1 m;
        m.pk.A = mat_from_json(j.at("pk").at("A"), mod, p.m(), p.n());
        m.pk.v = vec_from_json(j.at("pk").at("v"), mod, p.m());
        m.ct.a = vec_from_json(j.at("ct").at("a"), mod, p.n());
        m.ct.w = zq_from_json(j.at("ct").at("w"), mod);
        return m;
    } catch (const json::exception& e) {
        throw CodecError(std::string("malformed first message: ") + e.what());
    }
}

json msg2_to_json(const Msg2& m) { return json{{"y", vec_to_json(m.y)}, {"u", bits_to_json(m.u)}}; }

Msg2 msg2_from_json(const json& j, const Params& p)
{
    try {
        return Msg2{vec_from_json(j.at("y"), p.mod(), p.m()), bits_from_json(j.at("u"), p.gadget_rows())};
    } catch (const json::exception& e) {
        throw CodecError(std::string("malformed response: ") + e.what());
    }
}

}  // namespace rtcf
