#include "oambsm/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace oambsm::io {

double round12(double v) {
    if (!std::isfinite(v))
        return v;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::strtod(buf, nullptr);
}

json real(double v) { return json(round12(v)); }

json complex_matrix_to_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(json::array({real(m(i, j).real()), real(m(i, j).imag())}));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXcd complex_matrix_from_json(const json& j) {
    const auto rows = j.size();
    if (rows == 0)
        throw std::invalid_argument("empty matrix");
    const auto cols = j.at(0).size();
    Eigen::MatrixXcd m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (j.at(i).size() != cols)
            throw std::invalid_argument("ragged matrix");
        for (std::size_t k = 0; k < cols; ++k) {
            const json& e = j.at(i).at(k);
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                Complex(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    return m;
}

json state_to_json(const TwoPhotonState& s) {
    json j;
    j["subspace_m"] = s.subspace_m;
    j["amplitudes"] = complex_matrix_to_json(s.amplitudes);
    return j;
}

TwoPhotonState state_from_json(const json& j) {
    Eigen::MatrixXcd m = complex_matrix_from_json(j.at("amplitudes"));
    if (m.rows() != 4 || m.cols() != 4)
        throw std::invalid_argument("state amplitudes must be 4x4");
    return TwoPhotonState(m, j.at("subspace_m").get<int>());
}

json table_to_json(const CoincidenceTable& t) {
    json j;
    j["kind"] = t.kind == CoincidenceTable::Kind::Probability ? "probability"
                                                              : "counts";
    json rows = json::array();
    for (int k = 0; k < 4; ++k) {
        json row = json::array();
        for (int l = 0; l < 4; ++l)
            row.push_back(real(t.values(k, l)));
        rows.push_back(std::move(row));
    }
    j["values"] = std::move(rows);
    if (t.duration_s)
        j["duration_s"] = real(*t.duration_s);
    return j;
}

CoincidenceTable table_from_json(const json& j) {
    CoincidenceTable t;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "probability")
        t.kind = CoincidenceTable::Kind::Probability;
    else if (kind == "counts")
        t.kind = CoincidenceTable::Kind::Counts;
    else
        throw std::invalid_argument("bad table kind: " + kind);
    const json& rows = j.at("values");
    if (rows.size() != 4)
        throw std::invalid_argument("table must have 4 rows");
    for (int k = 0; k < 4; ++k) {
        if (rows.at(static_cast<std::size_t>(k)).size() != 4)
            throw std::invalid_argument("table rows must have 4 cells");
        for (int l = 0; l < 4; ++l)
            t.values(k, l) = rows.at(static_cast<std::size_t>(k))
                                 .at(static_cast<std::size_t>(l))
                                 .get<double>();
    }
    if (j.contains("duration_s"))
        t.duration_s = j.at("duration_s").get<double>();
    return t;
}

json pattern_to_json(const SupportPattern& p) {
    json combos = json::array();
    for (auto [k, l] : p.combos)
        combos.push_back(json::array({k, l}));
    return combos;
}

SupportPattern pattern_from_json(const json& j) {
    SupportPattern p;
    for (const auto& combo : j)
        p.combos.insert({combo.at(0).get<int>(), combo.at(1).get<int>()});
    return p;
}

json patterns_to_json(const PatternMap& patterns) {
    json j = json::object();
    for (const auto& [label, pattern] : patterns)
        j[to_string(label)] = pattern_to_json(pattern);
    return j;
}

PatternMap patterns_from_json(const json& j) {
    PatternMap patterns;
    for (const auto& [name, value] : j.items())
        patterns.emplace(bell_label_from_string(name),
                         pattern_from_json(value));
    return patterns;
}

json solution_to_json(const SolutionRecord& r) {
    json j;
    j["canonical_key"] = r.canonical_key;
    j["U"] = complex_matrix_to_json(r.u.matrix);
    j["patterns"] = patterns_to_json(r.patterns);
    j["provenance"] = r.provenance;
    j["found_at"] = r.found_at;
    return j;
}

SolutionRecord solution_from_json(const json& j) {
    SolutionRecord r;
    r.canonical_key = j.at("canonical_key").get<std::string>();
    Eigen::MatrixXcd m = complex_matrix_from_json(j.at("U"));
    if (m.rows() != 4 || m.cols() != 4)
        throw std::invalid_argument("solution U must be 4x4");
    r.u = ModeUnitary(m, DimTag::mode4);
    r.patterns = patterns_from_json(j.at("patterns"));
    r.provenance = j.at("provenance").get<std::string>();
    r.found_at = j.at("found_at").get<std::int64_t>();
    r.validate();
    return r;
}

json chain_to_json(const std::vector<ElementSpec>& chain) {
    json j = json::array();
    for (const auto& e : chain) {
        json item;
        item["kind"] = e.kind_name();
        json params = json::object();
        switch (e.kind) {
        case ElementSpec::Kind::DoveSingle:
            params["alpha"] = real(e.angle);
            params["m"] = e.m;
            break;
        case ElementSpec::Kind::DovePair:
            params["arm"] = e.arm;
            params["m"] = e.m;
            break;
        case ElementSpec::Kind::PhasePlate:
            params["phi"] = real(e.angle);
            params["arm"] = e.arm;
            break;
        case ElementSpec::Kind::QplateQwp:
            params["port"] = e.port;
            params["m"] = e.m;
            break;
        default:
            break;
        }
        item["params"] = std::move(params);
        j.push_back(std::move(item));
    }
    return j;
}

std::string matrix4_to_csv(const Mat4d& m) {
    std::ostringstream out;
    char buf[40];
    for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) {
            std::snprintf(buf, sizeof(buf), "%.12g", m(k, l));
            out << buf << (l == 3 ? "\n" : ",");
        }
    }
    return out.str();
}

Mat4d matrix4_from_csv(const std::string& text) {
    Mat4d m;
    std::istringstream in(text);
    std::string line;
    int k = 0;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (k >= 4)
            throw std::invalid_argument("csv: more than 4 rows");
        std::istringstream row(line);
        std::string cell;
        int l = 0;
        while (std::getline(row, cell, ',')) {
            if (l >= 4)
                throw std::invalid_argument("csv: more than 4 columns");
            std::size_t pos = 0;
            m(k, l) = std::stod(cell, &pos);
            ++l;
        }
        if (l != 4)
            throw std::invalid_argument("csv: row needs 4 columns");
        ++k;
    }
    if (k != 4)
        throw std::invalid_argument("csv: needs 4 rows");
    return m;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open: " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_solutions_jsonl(const std::filesystem::path& path,
                           const std::vector<SolutionRecord>& solutions) {
    std::ostringstream out;
    for (const auto& r : solutions)
        out << solution_to_json(r).dump() << "\n";
    write_file(path, out.str());
}

std::vector<SolutionRecord> read_solutions_jsonl(
    const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::vector<SolutionRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        out.push_back(solution_from_json(json::parse(line)));
    }
    return out;
}

} // namespace oambsm::io
