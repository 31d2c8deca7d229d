#include "duelbench/io.hpp"

#include <cstdio>
#include <fstream>

namespace duelbench {

using nlohmann::json;

nlohmann::json matrix_to_json(const PreferenceMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.items(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.items(); ++j) row.push_back(m.raw()(i, j));
        rows.push_back(std::move(row));
    }
    return json{{"k", m.items()}, {"p", std::move(rows)}};
}

namespace {

Eigen::MatrixXd parse_p_array(const json& rows) {
    if (!rows.is_array() || rows.empty()) throw ParseError("\"p\" must be a non-empty array");
    const std::size_t n = rows.size();
    Eigen::MatrixXd p(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const json& row = rows[i];
        if (!row.is_array() || row.size() != n)
            throw ParseError("matrix row " + std::to_string(i + 1) + " is not length " +
                             std::to_string(n));
        for (std::size_t j = 0; j < n; ++j) {
            if (!row[j].is_number())
                throw ParseError("matrix entry (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ") is not a number");
            p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                row[j].get<double>();
        }
    }
    return p;
}

PreferenceMatrix adopt(Eigen::MatrixXd p, bool repair) {
    return repair ? PreferenceMatrix::repaired(std::move(p))
                  : PreferenceMatrix::validated(std::move(p));
}

}  // namespace

PreferenceMatrix matrix_from_json(const json& j, bool repair) {
    if (!j.is_object() || !j.contains("k") || !j.contains("p"))
        throw ParseError("matrix object must carry \"k\" and \"p\"");
    Eigen::MatrixXd p = parse_p_array(j["p"]);
    if (!j["k"].is_number_integer() || j["k"].get<int>() != p.rows())
        throw ParseError("declared k does not match matrix size");
    return adopt(std::move(p), repair);
}

nlohmann::json sequence_to_json(const MatrixSequence& seq) {
    json arr = json::array();
    for (const auto& m : seq.matrices) arr.push_back(matrix_to_json(m)["p"]);
    return json{{"k", seq.k}, {"cycle", seq.cycle}, {"matrices", std::move(arr)}};
}

MatrixSequence sequence_from_json(const json& j, bool repair) {
    if (!j.is_object() || !j.contains("k") || !j.contains("matrices"))
        throw ParseError("sequence must carry \"k\" and \"matrices\"");
    MatrixSequence seq;
    if (!j["k"].is_number_integer()) throw ParseError("\"k\" must be an integer");
    seq.k = j["k"].get<int>();
    seq.cycle = j.value("cycle", false);
    const json& arr = j["matrices"];
    if (!arr.is_array()) throw ParseError("\"matrices\" must be an array");
    seq.matrices.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        try {
            Eigen::MatrixXd p =
                arr[i].is_object() ? parse_p_array(arr[i].at("p")) : parse_p_array(arr[i]);
            if (arr[i].is_object() && arr[i].contains("k") &&
                arr[i]["k"].get<int>() != seq.k)
                throw ParseError("element k disagrees with header k");
            seq.matrices.push_back(adopt(std::move(p), repair));
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ValidationError("matrix at round " + std::to_string(i + 1) +
                                  " rejected: " + e.what());
        }
        if (seq.matrices.back().items() != seq.k)
            throw ValidationError("matrix at round " + std::to_string(i + 1) +
                                  " has K = " + std::to_string(seq.matrices.back().items()) +
                                  ", header says " + std::to_string(seq.k));
    }
    return seq;
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

void write_json_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IOError("cannot write " + path);
    out << j.dump(2) << "\n";
    if (!out) throw IOError("write failed for " + path);
}

MatrixSequence load_sequence(const std::string& path, bool repair) {
    return sequence_from_json(read_json_file(path), repair);
}

void save_sequence(const MatrixSequence& seq, const std::string& path) {
    write_json_file(sequence_to_json(seq), path);
}

std::shared_ptr<EnvironmentStream> env_from_file(const std::string& path, std::int64_t horizon,
                                                 bool repair) {
    MatrixSequence seq = load_sequence(path, repair);
    return std::make_shared<FileEnvironment>(std::move(seq.matrices), seq.cycle, horizon,
                                             "file:" + path);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace duelbench
