#pragma once

#include <stdexcept>
#include <string>

namespace frap {

// Real number extended with +inf / -inf sentinels. Only ordering and
// max-with-finite are defined; anything else is a contract violation.
class ExtendedReal {
public:
    enum class Tag { Finite, PlusInf, MinusInf };

    ExtendedReal() : tag_(Tag::Finite), value_(0.0) {}

    static ExtendedReal finite(double v) { return ExtendedReal(Tag::Finite, v); }
    static ExtendedReal plus_inf() { return ExtendedReal(Tag::PlusInf, 0.0); }
    static ExtendedReal minus_inf() { return ExtendedReal(Tag::MinusInf, 0.0); }

    Tag tag() const { return tag_; }
    bool is_finite() const { return tag_ == Tag::Finite; }
    bool is_plus_inf() const { return tag_ == Tag::PlusInf; }
    bool is_minus_inf() const { return tag_ == Tag::MinusInf; }

    double value() const {
        if (!is_finite())
            throw std::logic_error("ExtendedReal: value() on non-finite");
        return value_;
    }

    // Total order with the infinities as extremes.
    friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
        if (a.tag_ == b.tag_)
            return a.tag_ == Tag::Finite && a.value_ < b.value_;
        if (a.tag_ == Tag::MinusInf) return true;
        if (a.tag_ == Tag::PlusInf) return false;
        return b.tag_ == Tag::PlusInf;
    }
    friend bool operator>(const ExtendedReal& a, const ExtendedReal& b) { return b < a; }
    friend bool operator<=(const ExtendedReal& a, const ExtendedReal& b) { return !(b < a); }
    friend bool operator>=(const ExtendedReal& a, const ExtendedReal& b) { return !(a < b); }
    friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
        if (a.tag_ != b.tag_) return false;
        return a.tag_ != Tag::Finite || a.value_ == b.value_;
    }
    friend bool operator!=(const ExtendedReal& a, const ExtendedReal& b) { return !(a == b); }

    friend ExtendedReal max(const ExtendedReal& a, double b) {
        if (a.is_plus_inf()) return a;
        if (a.is_minus_inf()) return finite(b);
        return a.value_ >= b ? a : finite(b);
    }

    std::string str() const {
        switch (tag_) {
            case Tag::PlusInf: return "+inf";
            case Tag::MinusInf: return "-inf";
            default: return std::to_string(value_);
        }
    }

private:
    ExtendedReal(Tag t, double v) : tag_(t), value_(v) {}
    Tag tag_;
    double value_;
};

} // namespace frap
