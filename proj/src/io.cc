#include "scrambled/io.h"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "scrambled/errors.h"

namespace scrambled::io {

namespace {

using nlohmann::json;

json parse_json(const std::string &text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

double number_at(const json &v, const std::string &where) {
    if (!v.is_number()) {
        throw ParseError(where + " is not a number");
    }
    return v.get<double>();
}

std::array<std::array<double, 4>, 4> matrix_field(const json &j, const char *key) {
    if (!j.contains(key)) {
        throw ParseError(std::string("state file has no '") + key + "' field");
    }
    const json &m = j.at(key);
    if (!m.is_array() || m.size() != 4) {
        throw ParseError(std::string("'") + key + "' must be a 4x4 array");
    }
    std::array<std::array<double, 4>, 4> out{};
    for (size_t r = 0; r < 4; ++r) {
        if (!m[r].is_array() || m[r].size() != 4) {
            throw ParseError(std::string("'") + key + "' must be a 4x4 array");
        }
        for (size_t c = 0; c < 4; ++c) {
            out[r][c] = number_at(m[r][c], std::string(key) + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
        }
    }
    return out;
}

}  // namespace

DensityMatrix parse_state(const std::string &text) {
    json j = parse_json(text);
    if (!j.is_object()) throw ParseError("state file must be a JSON object");
    auto re = matrix_field(j, "rho_re");
    auto im = matrix_field(j, "rho_im");
    ComplexMatrix4 m;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) m(r, c) = Complex(re[r][c], im[r][c]);
    }
    return DensityMatrix::from_matrix(m);
}

std::string format_state(const DensityMatrix &rho) {
    // One matrix row per line; numbers use the shortest round-trip form.
    auto rows = [&](bool imag) {
        std::string s = "[\n";
        for (int r = 0; r < 4; ++r) {
            json row = json::array();
            for (int c = 0; c < 4; ++c) {
                row.push_back(imag ? rho.matrix()(r, c).imag() : rho.matrix()(r, c).real());
            }
            s += "    " + row.dump() + (r < 3 ? ",\n" : "\n");
        }
        return s + "  ]";
    };
    return "{\n  \"rho_re\": " + rows(false) + ",\n  \"rho_im\": " + rows(true) + "\n}";
}

ScrambledData ProbabilityFile::data() const {
    return scramble(distributions);
}

ProbabilityFile parse_probabilities(const std::string &text) {
    json j = parse_json(text);
    if (!j.is_object()) throw ParseError("probability file must be a JSON object");
    ProbabilityFile out;
    if (j.contains("scrambled")) {
        if (!j.at("scrambled").is_boolean()) throw ParseError("'scrambled' must be true or false");
        out.scrambled = j.at("scrambled").get<bool>();
    }
    for (Setting s : kAllSettings) {
        std::string key(setting_name(s));
        if (!j.contains(key)) {
            if (s != Setting::YY) throw ParseError("probability file has no '" + key + "' field");
            continue;
        }
        const json &a = j.at(key);
        if (!a.is_array() || a.size() != 4) throw ParseError("'" + key + "' must hold four probabilities");
        std::array<double, 4> p{};
        for (size_t i = 0; i < 4; ++i) p[i] = number_at(a[i], key + "[" + std::to_string(i) + "]");
        if (out.scrambled) std::sort(p.begin(), p.end(), std::greater<>());
        out.distributions.emplace_back(s, p);
    }
    return out;
}

std::string format_probabilities(const ProbabilityFile &file) {
    json j;
    for (const auto &d : file.distributions) {
        j[std::string(setting_name(d.setting()))] = d.p();
    }
    j["scrambled"] = file.scrambled;
    return j.dump(2);
}

InputKind classify_input(const std::string &text) {
    json j = parse_json(text);
    if (j.is_object() && j.contains("rho_re")) return InputKind::State;
    if (j.is_object() && (j.contains("xx") || j.contains("zz"))) return InputKind::Probabilities;
    throw ParseError("input is neither a state file (rho_re, rho_im) nor a probability file (xx, zz)");
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path.string() + "'");
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
}

}  // namespace scrambled::io
