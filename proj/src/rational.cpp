#include "sarkisov/rational.hpp"

#include <cctype>

namespace sarkisov {

Rat Rat::parse(const std::string& text) {
    if (text == "inf" || text == "+inf") return Rat::infinity();
    auto slash = text.find('/');
    auto parse_int = [](const std::string& s) -> Int {
        if (s.empty()) fail(ErrorKind::InvalidInput, "empty integer literal");
        size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) fail(ErrorKind::InvalidInput, "bad integer literal: " + s);
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i])))
                fail(ErrorKind::InvalidInput, "bad integer literal: " + s);
        return Int(s);
    };
    if (slash == std::string::npos) return Rat(parse_int(text));
    Int num = parse_int(text.substr(0, slash));
    Int den = parse_int(text.substr(slash + 1));
    if (den == 0) fail(ErrorKind::InvalidInput, "zero denominator in: " + text);
    return Rat(num, den);
}

std::string Rat::str() const {
    if (inf_) return "inf";
    Int num = boost::multiprecision::numerator(v_);
    Int den = boost::multiprecision::denominator(v_);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

} // namespace sarkisov
