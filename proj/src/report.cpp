#include <cstdio>
#include <fstream>
#include <sstream>

#include "thetalift/identities.hpp"

namespace thetalift {

double relative_residual(cplx lhs, cplx rhs) {
    double d = std::abs(lhs - rhs);
    if (d == 0.0) return 0.0;
    double s = std::abs(rhs);
    return s == 0.0 ? std::numeric_limits<double>::infinity() : d / s;
}

ReportRow make_row(std::string id, std::string params, cplx lhs, cplx rhs, double budget) {
    ReportRow r;
    r.id = std::move(id);
    r.params = std::move(params);
    r.lhs = lhs;
    r.rhs = rhs;
    r.residual = relative_residual(lhs, rhs);
    r.budget = budget;
    r.pass = r.residual <= budget;
    return r;
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

namespace {

std::string format_complex(cplx z) {
    if (z.imag() == 0.0) return format_number(z.real());
    std::string im = format_number(z.imag());
    return format_number(z.real()) + (im[0] == '-' ? "" : "+") + im + "i";
}

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

std::string report_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream os;
    os << "check,parameters,lhs,rhs,relative_residual,budget,status\n";
    for (const auto& r : rows)
        os << quote(r.id) << ',' << quote(r.params) << ',' << format_complex(r.lhs) << ',' << format_complex(r.rhs) << ','
           << format_number(r.residual) << ',' << format_number(r.budget) << ',' << (r.pass ? "pass" : "fail") << '\n';
    return os.str();
}

void write_report(const std::vector<ReportRow>& rows, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::Config, "cannot write report to " + path);
    f << report_csv(rows);
    if (!f) throw Error(ErrorKind::Config, "write failed for " + path);
}

}  // namespace thetalift
