#include "rds/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rds {

namespace {

std::string fmt(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string fmt_short(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Whitespace tokens with '#'-to-end-of-line comments removed.
std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }
    return tokens;
}

class TokenReader {
  public:
    TokenReader(std::vector<std::string> tokens, std::string origin)
        : tokens_(std::move(tokens)), origin_(std::move(origin)) {}

    bool done() const { return pos_ >= tokens_.size(); }

    const std::string& next() {
        if (done()) throw ConfigError(origin_ + ": unexpected end of file");
        return tokens_[pos_++];
    }

    double number() {
        const std::string& tok = next();
        try {
            size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ": expected a number, got '" + tok + "'");
        }
    }

    long integer() {
        const double v = number();
        const long i = static_cast<long>(v);
        if (static_cast<double>(i) != v)
            throw ConfigError(origin_ + ": expected an integer");
        return i;
    }

    Matrix matrix(Index rows, Index cols) {
        Matrix M(rows, cols);
        for (Index i = 0; i < rows; ++i)
            for (Index j = 0; j < cols; ++j) M(i, j) = number();
        return M;
    }

    const std::string& origin() const { return origin_; }

  private:
    std::vector<std::string> tokens_;
    size_t pos_ = 0;
    std::string origin_;
};

void append_matrix_block(std::string& out, const std::string& name, const Matrix& M) {
    out += name + " " + std::to_string(M.rows()) + " " + std::to_string(M.cols()) + "\n";
    for (Index i = 0; i < M.rows(); ++i) {
        for (Index j = 0; j < M.cols(); ++j) {
            if (j) out += ' ';
            out += fmt(M(i, j));
        }
        out += '\n';
    }
}

Matrix read_named_block(TokenReader& reader, const std::string& name, Index rows, Index cols) {
    const std::string& tok = reader.next();
    if (tok != name)
        throw ConfigError(reader.origin() + ": expected block '" + name + "', got '" + tok + "'");
    const Index r = reader.integer();
    const Index c = reader.integer();
    if (r != rows || c != cols)
        throw ConfigError(reader.origin() + ": block '" + name + "' must be " +
                          std::to_string(rows) + " x " + std::to_string(cols));
    return reader.matrix(rows, cols);
}

}  // namespace

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write file: " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

RandomLinearSystem read_system_file(const std::filesystem::path& path) {
    TokenReader reader(tokenize(read_file(path)), path.string());
    if (reader.next() != "dims")
        throw ConfigError(path.string() + ": system file must start with 'dims n m p Z'");
    const Index n = reader.integer(), m = reader.integer();
    const Index p = reader.integer(), Z = reader.integer();
    if (n < 1 || m < 1 || p < 1 || Z < 1)
        throw ConfigError(path.string() + ": dims must be positive");

    RandomLinearSystem sys;
    sys.coeffs = AffineCoefficients::zero(n, m, p, Z);
    while (!reader.done()) {
        const std::string name = reader.next();
        if (name == "label") {
            sys.label = reader.next();
            continue;
        }
        if (name.size() < 2) throw ConfigError(path.string() + ": unknown key '" + name + "'");
        const char kind = name[0];
        long j = 0;
        try {
            j = std::stol(name.substr(1));
        } catch (const std::exception&) {
            throw ConfigError(path.string() + ": unknown key '" + name + "'");
        }
        if (j < 0 || j > Z)
            throw ConfigError(path.string() + ": block index out of range in '" + name + "'");
        const Index rows = (kind == 'A' || kind == 'B') ? n : p;
        const Index cols = (kind == 'A' || kind == 'C') ? n : m;
        if (kind != 'A' && kind != 'B' && kind != 'C' && kind != 'D')
            throw ConfigError(path.string() + ": unknown key '" + name + "'");
        const Index r = reader.integer(), c = reader.integer();
        if (r != rows || c != cols)
            throw ConfigError(path.string() + ": block '" + name + "' must be " +
                              std::to_string(rows) + " x " + std::to_string(cols));
        const Matrix M = reader.matrix(rows, cols);
        if (j == 0) {
            if (kind == 'A') sys.coeffs.A0 = M;
            else if (kind == 'B') sys.coeffs.B0 = M;
            else if (kind == 'C') sys.coeffs.C0 = M;
            else sys.coeffs.D0 = M;
        } else {
            auto& list = (kind == 'A')   ? sys.coeffs.A
                         : (kind == 'B') ? sys.coeffs.B
                         : (kind == 'C') ? sys.coeffs.C
                                         : sys.coeffs.D;
            list[static_cast<size_t>(j - 1)] = M;
        }
    }
    sys.coeffs.validate();
    return sys;
}

std::string format_system_file(const RandomLinearSystem& sys) {
    const AffineCoefficients& c = sys.coeffs;
    std::string out = "dims " + std::to_string(c.n) + " " + std::to_string(c.m) + " " +
                      std::to_string(c.p) + " " + std::to_string(c.Z) + "\n";
    if (!sys.label.empty()) out += "label " + sys.label + "\n";
    append_matrix_block(out, "A0", c.A0);
    for (Index j = 0; j < c.Z; ++j)
        append_matrix_block(out, "A" + std::to_string(j + 1), c.A[static_cast<size_t>(j)]);
    append_matrix_block(out, "B0", c.B0);
    for (Index j = 0; j < c.Z; ++j)
        append_matrix_block(out, "B" + std::to_string(j + 1), c.B[static_cast<size_t>(j)]);
    append_matrix_block(out, "C0", c.C0);
    for (Index j = 0; j < c.Z; ++j)
        append_matrix_block(out, "C" + std::to_string(j + 1), c.C[static_cast<size_t>(j)]);
    append_matrix_block(out, "D0", c.D0);
    for (Index j = 0; j < c.Z; ++j)
        append_matrix_block(out, "D" + std::to_string(j + 1), c.D[static_cast<size_t>(j)]);
    return out;
}

DistributionModel read_model_file(const std::filesystem::path& path) {
    TokenReader reader(tokenize(read_file(path)), path.string());
    if (reader.next() != "dim")
        throw ConfigError(path.string() + ": model file must start with 'dim Z'");
    const Index Z = reader.integer();
    if (Z < 1) throw ConfigError(path.string() + ": dim must be positive");
    const Matrix mean = read_named_block(reader, "mean", 1, Z);
    const Matrix cov = read_named_block(reader, "covariance", Z, Z);
    if (!reader.done())
        throw ConfigError(path.string() + ": trailing content after covariance block");
    return DistributionModel::from_moments(mean.row(0).transpose(), cov);
}

std::string format_model_file(const DistributionModel& model) {
    std::string out = "dim " + std::to_string(model.dim) + "\n";
    append_matrix_block(out, "mean", model.mean.transpose());
    append_matrix_block(out, "covariance", model.covariance);
    return out;
}

GramMatrix read_gram_file(const std::filesystem::path& path) {
    TokenReader reader(tokenize(read_file(path)), path.string());
    if (reader.next() != "dims")
        throw ConfigError(path.string() + ": gram file must start with 'dims n m'");
    const Index n = reader.integer(), m = reader.integer();
    const Index sz = (n + m) * n;
    GramMatrix gram{n, m, read_named_block(reader, "gram", sz, sz)};
    if (!reader.done()) throw ConfigError(path.string() + ": trailing content after gram block");
    return gram;
}

std::string format_gram_file(const GramMatrix& gram) {
    std::string out = "dims " + std::to_string(gram.n) + " " + std::to_string(gram.m) + "\n";
    append_matrix_block(out, "gram", gram.G);
    return out;
}

Matrix read_gain_file(const std::filesystem::path& path) {
    TokenReader reader(tokenize(read_file(path)), path.string());
    if (reader.next() != "F")
        throw ConfigError(path.string() + ": gain file must start with 'F m n'");
    const Index m = reader.integer(), n = reader.integer();
    const Matrix F = reader.matrix(m, n);
    if (!reader.done()) throw ConfigError(path.string() + ": trailing content after gain block");
    return F;
}

std::string format_gain_file(const Matrix& F) {
    std::string out;
    append_matrix_block(out, "F", F);
    return out;
}

std::string format_identification_trace_csv(const IdentificationResult& result) {
    std::string out = "k";
    if (result.trace.empty()) return out + "\n";
    const auto& first = result.trace.front();
    for (Index i = 0; i < first.u.size(); ++i) out += ",u_" + std::to_string(i + 1);
    for (Index i = 0; i < first.y.size(); ++i) out += ",y_" + std::to_string(i + 1);
    for (Index i = 0; i < first.x_pred.size(); ++i) out += ",xpred_" + std::to_string(i + 1);
    for (Index i = 0; i < first.xi_filt.size(); ++i) out += ",xifilt_" + std::to_string(i + 1);
    out += "\n";
    for (const auto& row : result.trace) {
        out += std::to_string(row.k);
        for (Index i = 0; i < row.u.size(); ++i) out += "," + fmt(row.u[i]);
        for (Index i = 0; i < row.y.size(); ++i) out += "," + fmt(row.y[i]);
        for (Index i = 0; i < row.x_pred.size(); ++i) out += "," + fmt(row.x_pred[i]);
        for (Index i = 0; i < row.xi_filt.size(); ++i) out += "," + fmt(row.xi_filt[i]);
        out += "\n";
    }
    return out;
}

std::string format_trajectory_csv(const Trajectory& traj) {
    std::string out = "k";
    const long K = traj.length();
    if (K == 0) return out + "\n";
    for (Index i = 0; i < traj.u_applied.front().size(); ++i) out += ",u_" + std::to_string(i + 1);
    for (Index i = 0; i < traj.y.front().size(); ++i) out += ",y_" + std::to_string(i + 1);
    const bool has_est = !traj.x_estimate.empty();
    if (has_est) {
        for (Index i = 0; i < traj.x_estimate.front().size(); ++i)
            out += ",xhat_" + std::to_string(i + 1);
        for (Index i = 0; i < traj.xi_estimate.front().size(); ++i)
            out += ",xihat_" + std::to_string(i + 1);
    }
    const bool has_state = !traj.true_state.empty();
    if (has_state)
        for (Index i = 0; i < traj.true_state.front().size(); ++i)
            out += ",q_" + std::to_string(i + 1);
    out += "\n";
    for (long k = 0; k < K; ++k) {
        const auto s = static_cast<size_t>(k);
        out += std::to_string(k);
        for (Index i = 0; i < traj.u_applied[s].size(); ++i) out += "," + fmt(traj.u_applied[s][i]);
        for (Index i = 0; i < traj.y[s].size(); ++i) out += "," + fmt(traj.y[s][i]);
        if (has_est) {
            for (Index i = 0; i < traj.x_estimate[s].size(); ++i)
                out += "," + fmt(traj.x_estimate[s][i]);
            for (Index i = 0; i < traj.xi_estimate[s].size(); ++i)
                out += "," + fmt(traj.xi_estimate[s][i]);
        }
        if (has_state)
            for (Index i = 0; i < traj.true_state[s].size(); ++i)
                out += "," + fmt(traj.true_state[s][i]);
        out += "\n";
    }
    return out;
}

std::string format_rms_csv(const MonteCarloStats& stats) {
    std::string out = "k,rms\n";
    for (size_t k = 0; k < stats.rms.size(); ++k)
        out += std::to_string(k) + "," + fmt(stats.rms[k]) + "\n";
    return out;
}

std::string format_synthesis_report(const SynthesisResult& res, Index nbar) {
    std::string out;
    out += "stabilizable " + std::string(res.stabilizable ? "yes" : "no") + "\n";
    out += "nbar " + std::to_string(nbar) + "\n";
    if (res.stabilizable) {
        out += "lambda_star " + fmt(res.lambda_star) + "\n";
        append_matrix_block(out, "F", res.F);
        append_matrix_block(out, "X", res.X);
        append_matrix_block(out, "Y", res.Y);
    }
    out += "bisection_trace " + std::to_string(res.trace.size()) + "\n";
    for (const auto& pt : res.trace)
        out += fmt_short(pt.lambda) + " " + (pt.feasible ? "feasible" : "infeasible") + "\n";
    return out;
}

std::string format_analysis_report(const AnalysisResult& res) {
    std::string out;
    out += "bounded " + std::string(res.bounded ? "yes" : "no") + "\n";
    if (res.bounded) {
        out += "lambda_star " + fmt(res.lambda_star) + "\n";
        append_matrix_block(out, "P", res.P);
    }
    out += "bisection_trace " + std::to_string(res.trace.size()) + "\n";
    for (const auto& pt : res.trace)
        out += fmt_short(pt.lambda) + " " + (pt.feasible ? "feasible" : "infeasible") + "\n";
    return out;
}

std::string format_line_plot_svg(const std::string& title, const std::vector<PlotSeries>& series) {
    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    const double width = 720, height = 420;
    const double left = 60, right = 20, top = 36, bottom = 32;

    size_t max_len = 0;
    double lo = 0.0, hi = 1.0;
    bool first = true;
    for (const auto& s : series) {
        max_len = std::max(max_len, s.values.size());
        for (double v : s.values) {
            if (first) {
                lo = hi = v;
                first = false;
            }
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (first || hi == lo) {
        hi = lo + 1.0;
        lo -= 1.0;
    }
    const double pw = width - left - right, ph = height - top - bottom;
    auto xpix = [&](size_t i) {
        return left + (max_len > 1 ? pw * static_cast<double>(i) / static_cast<double>(max_len - 1)
                                   : 0.0);
    };
    auto ypix = [&](double v) { return top + ph * (1.0 - (v - lo) / (hi - lo)); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\""
        << top + ph << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + ph << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << ypix(hi) + 4
        << "\" text-anchor=\"end\" font-size=\"10\">" << fmt_short(hi) << "</text>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << ypix(lo) + 4
        << "\" text-anchor=\"end\" font-size=\"10\">" << fmt_short(lo) << "</text>\n";
    svg << "<text x=\"" << left + pw << "\" y=\"" << top + ph + 16
        << "\" text-anchor=\"end\" font-size=\"10\">" << (max_len ? max_len - 1 : 0)
        << "</text>\n";

    for (size_t s = 0; s < series.size(); ++s) {
        const char* color = kColors[s % (sizeof(kColors) / sizeof(kColors[0]))];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < series[s].values.size(); ++i) {
            if (i) svg << ' ';
            svg << xpix(i) << ',' << ypix(series[s].values[i]);
        }
        svg << "\"/>\n";
        svg << "<text x=\"" << left + pw - 4 << "\" y=\"" << top + 14 + 14 * static_cast<double>(s)
            << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << color << "\">"
            << series[s].label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

// ---- config -------------------------------------------------------------

const std::string* ConfigSection::find(const std::string& key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return &v;
    return nullptr;
}

const ConfigSection* ConfigMap::find(const std::string& name) const {
    for (const auto& s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

bool ConfigMap::has(const std::string& section, const std::string& key) const {
    const ConfigSection* s = find(section);
    return s && s->find(key);
}

std::string ConfigMap::get_string(const std::string& section, const std::string& key,
                                  std::optional<std::string> fallback) const {
    const ConfigSection* s = find(section);
    const std::string* v = s ? s->find(key) : nullptr;
    if (!v) {
        if (fallback) return *fallback;
        throw ConfigError("missing config key [" + section + "] " + key);
    }
    return *v;
}

double ConfigMap::get_number(const std::string& section, const std::string& key,
                             std::optional<double> fallback) const {
    if (!has(section, key)) {
        if (fallback) return *fallback;
        throw ConfigError("missing config key [" + section + "] " + key);
    }
    const std::string v = get_string(section, key);
    try {
        size_t used = 0;
        const double x = std::stod(v, &used);
        while (used < v.size() && std::isspace(static_cast<unsigned char>(v[used]))) ++used;
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key [" + section + "] " + key + " is not a number: '" + v + "'");
    }
}

long ConfigMap::get_integer(const std::string& section, const std::string& key,
                            std::optional<long> fallback) const {
    if (!has(section, key)) {
        if (fallback) return *fallback;
        throw ConfigError("missing config key [" + section + "] " + key);
    }
    const double v = get_number(section, key);
    const long i = static_cast<long>(v);
    if (static_cast<double>(i) != v)
        throw ConfigError("config key [" + section + "] " + key + " must be an integer");
    return i;
}

bool ConfigMap::get_flag(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get_string(section, key);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError("config key [" + section + "] " + key + " must be a boolean");
}

std::vector<double> ConfigMap::get_numbers(const std::string& section,
                                           const std::string& key) const {
    const std::string v = get_string(section, key);
    std::istringstream ss(v);
    std::vector<double> values;
    std::string tok;
    while (ss >> tok) {
        try {
            values.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("config key [" + section + "] " + key + " has non-numeric entry '" +
                              tok + "'");
        }
    }
    if (values.empty())
        throw ConfigError("config key [" + section + "] " + key + " is empty");
    return values;
}

namespace {

std::string strip(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace

ConfigMap parse_config(const std::string& text) {
    ConfigMap cfg;
    std::istringstream lines(text);
    std::string line;
    long lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = strip(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": malformed section header");
            ConfigSection section;
            section.name = strip(line.substr(1, line.size() - 2));
            if (section.name.empty())
                throw ConfigError("config line " + std::to_string(lineno) + ": empty section name");
            cfg.sections.push_back(std::move(section));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        if (cfg.sections.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": key outside of any [section]");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        for (const auto& [k, v] : cfg.sections.back().entries)
            if (k == key)
                throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" +
                                  key + "'");
        cfg.sections.back().entries.emplace_back(key, value);
    }
    return cfg;
}

ConfigMap read_config_file(const std::filesystem::path& path) {
    return parse_config(read_file(path));
}

std::string serialize_config(const ConfigMap& cfg) {
    std::string out;
    for (const auto& section : cfg.sections) {
        out += "[" + section.name + "]\n";
        for (const auto& [k, v] : section.entries) out += k + " = " + v + "\n";
        out += "\n";
    }
    return out;
}

}  // namespace rds
