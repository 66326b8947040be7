#include <fstream>

#include "json.hpp"
#include "nnls/scattering.hpp"

namespace nnls {

namespace {

using nlohmann::json;

json pack(cplx z) { return json::array({z.real(), z.imag()}); }
cplx unpack(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json pack(const std::vector<cplx>& v) {
    json a = json::array();
    for (const auto& z : v) a.push_back(pack(z));
    return a;
}

std::vector<cplx> unpack_vec(const json& j) {
    std::vector<cplx> v;
    v.reserve(j.size());
    for (const auto& e : j) v.push_back(unpack(e));
    return v;
}

constexpr int kCacheVersion = 1;

}  // namespace

void save_spectral_cache(const SpectralData& sd, const std::string& path) {
    json j;
    j["format"] = "nnls-spectral-cache";
    j["version"] = kCacheVersion;
    j["profile"] = sd.fingerprint;
    j["A"] = sd.A;
    j["grid"] = {{"k_min", sd.grid.k_min}, {"k_max", sd.grid.k_max}, {"n_per_sign", sd.grid.n_per_sign}};
    j["k"] = sd.k;
    j["a1"] = pack(sd.a1);
    j["a2"] = pack(sd.a2);
    j["b"] = pack(sd.b);
    j["k1"] = sd.k1;
    j["case"] = to_string(sd.case_tag);
    j["a2_0"] = sd.a2_0;
    j["a2_0_extrapolated"] = sd.a2_0_extrapolated;
    j["a11"] = pack(sd.a11);
    j["a21"] = pack(sd.a21);
    j["b0"] = pack(sd.b0);
    j["assumption2"] = sd.assumption2;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write spectral cache '" + path + "'");
    out << j.dump(1) << '\n';
}

SpectralData load_spectral_cache(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read spectral cache '" + path + "'");
    json j;
    try {
        in >> j;
        if (j.at("format") != "nnls-spectral-cache" || j.at("version").get<int>() != kCacheVersion)
            throw std::runtime_error("unsupported cache format");
        SpectralData sd;
        sd.fingerprint = j.at("profile").get<std::string>();
        sd.A = j.at("A").get<double>();
        sd.grid.k_min = j.at("grid").at("k_min").get<double>();
        sd.grid.k_max = j.at("grid").at("k_max").get<double>();
        sd.grid.n_per_sign = j.at("grid").at("n_per_sign").get<int>();
        sd.k = j.at("k").get<std::vector<double>>();
        sd.a1 = unpack_vec(j.at("a1"));
        sd.a2 = unpack_vec(j.at("a2"));
        sd.b = unpack_vec(j.at("b"));
        sd.k1 = j.at("k1").get<double>();
        sd.case_tag = case_tag_from_string(j.at("case").get<std::string>());
        sd.a2_0 = j.at("a2_0").get<double>();
        sd.a2_0_extrapolated = j.at("a2_0_extrapolated").get<double>();
        sd.a11 = unpack(j.at("a11"));
        sd.a21 = unpack(j.at("a21"));
        sd.b0 = unpack(j.at("b0"));
        sd.assumption2 = j.at("assumption2").get<double>();
        const std::size_t n = sd.k.size();
        if (n != 2 * static_cast<std::size_t>(sd.grid.n_per_sign) || sd.a1.size() != n || sd.a2.size() != n ||
            sd.b.size() != n)
            throw std::runtime_error("inconsistent sample lengths");
        return sd;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed spectral cache '" + path + "': " + e.what());
    }
}

}  // namespace nnls
