#pragma once

#include <json.hpp>
#include <string>

namespace coarsemod {

/// Verdict record for a window-scale property check. A certificate never
/// claims the global property: it states that the property held with the
/// given constant for every sampled configuration inside the window.
struct ControlCertificate {
    std::string kind;          // lean / insular / antithetic-insular / bounded / ...
    long long constant = 0;    // D, d, b, R, ... depending on kind
    int window = 0;
    bool pass = false;
    nlohmann::json counterexample;  // null unless pass == false
    nlohmann::json details;         // measured values, sample counts, notes

    nlohmann::json toJson() const {
        nlohmann::json j{{"kind", kind},
                         {"constant", constant},
                         {"window", window},
                         {"verdict", pass ? "pass" : "fail"}};
        j["counterexample"] = counterexample.is_null() ? nlohmann::json() : counterexample;
        if (!details.is_null()) j["details"] = details;
        return j;
    }

    static ControlCertificate passed(std::string kind, long long c, int window,
                                     nlohmann::json details = nullptr) {
        ControlCertificate r;
        r.kind = std::move(kind);
        r.constant = c;
        r.window = window;
        r.pass = true;
        r.details = std::move(details);
        return r;
    }

    static ControlCertificate failed(std::string kind, long long c, int window,
                                     nlohmann::json counterexample,
                                     nlohmann::json details = nullptr) {
        ControlCertificate r;
        r.kind = std::move(kind);
        r.constant = c;
        r.window = window;
        r.pass = false;
        r.counterexample = std::move(counterexample);
        r.details = std::move(details);
        return r;
    }
};

/// Raised when an evaluation needs coordinates beyond the ambient window; the
/// caller should shrink the certificate radius or grow the window.
struct WindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace coarsemod
