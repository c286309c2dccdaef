#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "fairscope/fairscope.hpp"

namespace fstest {

inline std::filesystem::path data_dir() { return FAIRSCOPE_DATA_DIR; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("fairscope-" + tag + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline fairscope::Frame parse(const std::string& csv, const fairscope::Schema& schema)
{
    std::istringstream in(csv);
    return fairscope::parse_csv(in, schema);
}

/// n x p standard-normal matrix from a fixed seed.
inline Eigen::MatrixXd random_matrix(Eigen::Index n, Eigen::Index p, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist;
    Eigen::MatrixXd x(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) {
            x(i, j) = dist(gen);
        }
    }
    return x;
}

inline double mse(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).squaredNorm() / a.size(); }

inline double variance(const Eigen::VectorXd& y) { return (y.array() - y.mean()).square().mean(); }

/// Synthetic population with one gapped attribute and two quiet ones.
inline fairscope::SynthSpec gap_spec(double gap, std::size_t n, std::uint64_t seed)
{
    fairscope::SynthSpec s;
    s.n_rows = n;
    s.seed = seed;
    s.noise_sigma = 50.0;
    s.numeric_features = {{"age", 40.0, 10.0, 3.0}, {"hours", 38.0, 6.0, 2.0}};
    s.binary_attributes = {{"gender", 0.5, gap, "", 0.0}, {"migrant", 0.3, 0.0, "", 0.0}, {"race", 0.2, 0.0, "", 0.0}};
    return s;
}

}  // namespace fstest
