#include "sclgeo/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sclgeo {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

void write_embedding_csv(std::ostream& os, const Matrix& H) {
    os << H.rows() << "," << H.cols() << "\n";
    for (Eigen::Index r = 0; r < H.rows(); ++r) {
        for (Eigen::Index c = 0; c < H.cols(); ++c) {
            if (c) os << ",";
            os << fmt17(H(r, c));
        }
        os << "\n";
    }
}

Matrix read_embedding_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("embedding csv: missing header");
    const auto hdr = split_csv(line);
    if (hdr.size() != 2) throw std::runtime_error("embedding csv: bad header");
    const int d = std::stoi(hdr[0]);
    const int n = std::stoi(hdr[1]);
    if (d < 1 || n < 1) throw std::runtime_error("embedding csv: bad dimensions");
    Matrix H(d, n);
    for (int r = 0; r < d; ++r) {
        if (!std::getline(is, line))
            throw std::runtime_error("embedding csv: truncated");
        const auto fields = split_csv(line);
        if (static_cast<int>(fields.size()) != n)
            throw std::runtime_error("embedding csv: wrong column count in row " +
                                     std::to_string(r));
        for (int c = 0; c < n; ++c) H(r, c) = std::stod(fields[c]);
    }
    return H;
}

void write_embedding_csv_file(const std::string& path, const Matrix& H) {
    std::ostringstream ss;
    write_embedding_csv(ss, H);
    atomic_write_file(path, ss.str());
}

Matrix read_embedding_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return read_embedding_csv(f);
}

void write_labels_csv(std::ostream& os, const LabelSet& y) {
    for (int i = 0; i < y.n(); ++i) {
        if (i) os << ",";
        os << y.labels()[i];
    }
    os << "\n";
}

LabelSet read_labels_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("labels csv: empty input");
    std::vector<int> labels;
    for (const auto& f : split_csv(line)) labels.push_back(std::stoi(f));
    return LabelSet(std::move(labels));
}

void write_labels_csv_file(const std::string& path, const LabelSet& y) {
    std::ostringstream ss;
    write_labels_csv(ss, y);
    atomic_write_file(path, ss.str());
}

LabelSet read_labels_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return read_labels_csv(f);
}

void write_matrix_csv(std::ostream& os, const Matrix& M) {
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        for (Eigen::Index c = 0; c < M.cols(); ++c) {
            if (c) os << ",";
            os << fmt17(M(r, c));
        }
        os << "\n";
    }
}

json to_json(const BatchSet& b) {
    return json{{"n", b.n}, {"batches", b.batches}};
}

BatchSet batchset_from_json(const json& j) {
    BatchSet b;
    b.n = j.at("n").get<int>();
    b.batches = j.at("batches").get<std::vector<std::vector<int>>>();
    b.validate();
    return b;
}

json to_json(const ConditionReport& r) {
    return json{{"per_class_connected", r.per_class_connected},
                {"missing_cross_pairs", r.missing_cross_pairs},
                {"satisfied", r.satisfied}};
}

json to_json(const LossReport& r) {
    return json{{"value", r.value},     {"lower_bound", r.lower_bound},
                {"gap", r.gap},         {"achieved", r.achieved},
                {"tau", r.tau},         {"per_sample", r.per_sample}};
}

json to_json(const GeometryReport& r) {
    std::vector<std::vector<double>> table(r.cosine_table.rows());
    for (Eigen::Index i = 0; i < r.cosine_table.rows(); ++i)
        for (Eigen::Index j = 0; j < r.cosine_table.cols(); ++j)
            table[i].push_back(r.cosine_table(i, j));
    return json{{"delta_gm", r.delta_gm},
                {"delta_etf", r.delta_etf},
                {"beta_nc", r.beta_nc},
                {"mean_cos", r.mean_cos},
                {"mean_abs_cos", r.mean_abs_cos},
                {"cosine_table", table}};
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
    os << "iter,loss,gap,delta_gm,beta_nc,mean_cos\n";
    for (const auto& r : t.records)
        os << r.iter << "," << fmt17(r.loss) << "," << fmt17(r.gap) << ","
           << fmt17(r.delta_gm) << "," << fmt17(r.beta_nc) << "," << fmt17(r.mean_cos)
           << "\n";
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
        f << content;
        if (!f) throw std::runtime_error("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace sclgeo
