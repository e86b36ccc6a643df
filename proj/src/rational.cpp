#include "ide/rational.hpp"

namespace ide {

Rational Rational::parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Rational: empty string");
    std::size_t slash = s.find('/');
    auto check_int = [](const std::string& part) {
        if (part.empty()) return false;
        std::size_t i = part[0] == '-' ? 1 : 0;
        if (i == part.size()) return false;
        for (; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9') return false;
        return true;
    };
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!check_int(num) || !check_int(den))
        throw std::invalid_argument("Rational: malformed literal '" + s + "'");
    mpq_class v(num + "/" + den, 10);
    if (v.get_den() == 0) throw std::invalid_argument("Rational: zero denominator in '" + s + "'");
    v.canonicalize();
    return Rational(v);
}

std::string Rational::str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_str();
}

}  // namespace ide
