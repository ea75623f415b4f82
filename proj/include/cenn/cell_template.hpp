#ifndef CENN_CELL_TEMPLATE_HPP
#define CENN_CELL_TEMPLATE_HPP

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cenn {

// One CeNN instruction: feedback matrix A, feedforward matrix B, bias Z,
// and how long to run it (1 time step = 1 ns).
struct Template {
    std::string name;
    int radius = 1;
    std::vector<double> feedback;     // A, (2r+1)^2 row major
    std::vector<double> feedforward;  // B, (2r+1)^2 row major
    double bias = 0.0;                // Z
    double duration_ns = 0.0;

    Template() = default;
    Template(std::string n, int r, std::vector<double> a, std::vector<double> b,
             double z, double duration)
        : name(std::move(n)), radius(r), feedback(std::move(a)),
          feedforward(std::move(b)), bias(z), duration_ns(duration) {
        validate();
    }

    int side() const { return 2 * radius + 1; }

    double a(int dr, int dc) const {
        return feedback[static_cast<std::size_t>(dr + radius) * side() + (dc + radius)];
    }
    double b(int dr, int dc) const {
        return feedforward[static_cast<std::size_t>(dr + radius) * side() + (dc + radius)];
    }

    double magnitude() const {  // sum of |a| and |b| entries; drives OTA power
        double s = 0.0;
        for (double v : feedback) s += std::abs(v);
        for (double v : feedforward) s += std::abs(v);
        return s;
    }

    Template with_duration(double ns) const {
        Template t = *this;
        t.duration_ns = ns;
        return t;
    }

    void validate() const {
        const std::size_t m = static_cast<std::size_t>(side()) * side();
        if (radius < 1)
            throw std::invalid_argument("Template: radius must be >= 1");
        if (feedback.size() != m || feedforward.size() != m)
            throw std::invalid_argument("Template: A/B must be (2r+1)x(2r+1)");
        if (!(duration_ns >= 0.0))
            throw std::invalid_argument("Template: duration must be >= 0");
    }
};

// Line-oriented text form, r=1 only:
//   name a00 .. a22 b00 .. b22 z duration_ns
inline std::string dump_template_line(const Template& t) {
    if (t.radius != 1)
        throw std::invalid_argument("template text format only covers r=1");
    std::ostringstream os;
    os.precision(17);
    os << t.name;
    for (double v : t.feedback) os << ' ' << v;
    for (double v : t.feedforward) os << ' ' << v;
    os << ' ' << t.bias << ' ' << t.duration_ns;
    return os.str();
}

inline Template parse_template_line(const std::string& line) {
    std::istringstream is(line);
    std::string name;
    if (!(is >> name))
        throw std::invalid_argument("template line: missing name");
    std::vector<double> vals;
    double v;
    while (is >> v) vals.push_back(v);
    if (vals.size() != 20)
        throw std::invalid_argument("template line '" + name + "': expected 20 numbers, got " +
                                    std::to_string(vals.size()));
    std::vector<double> a(vals.begin(), vals.begin() + 9);
    std::vector<double> b(vals.begin() + 9, vals.begin() + 18);
    return Template(name, 1, std::move(a), std::move(b), vals[18], vals[19]);
}

inline std::string dump_templates(const std::vector<Template>& ts) {
    std::string out;
    for (const Template& t : ts) {
        out += dump_template_line(t);
        out += '\n';
    }
    return out;
}

inline std::vector<Template> parse_templates(const std::string& text) {
    std::vector<Template> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        out.push_back(parse_template_line(line));
    }
    return out;
}

}  // namespace cenn

#endif
