#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bkc/expr.hpp"
#include "bkc/sampler.hpp"

namespace bkc {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Skipped marks a check that does not apply to the requested k; it never fails a run.
enum class Status { Pass, Fail, Undecided, Skipped };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Undecided: return "undecided";
    case Status::Skipped: return "skipped";
  }
  return "?";
}

inline Status status_from_string(const std::string& s) {
  if (s == "pass") return Status::Pass;
  if (s == "fail") return Status::Fail;
  if (s == "undecided") return Status::Undecided;
  if (s == "skipped") return Status::Skipped;
  throw std::invalid_argument("unknown status '" + s + "'");
}

struct ReportDetail {
  std::string description;
  std::string where;
  std::string observed;
  std::string expected;

  friend bool operator==(const ReportDetail&, const ReportDetail&) = default;
};

struct VerificationReport {
  std::string check_name;
  Status status = Status::Pass;
  double max_error = 0.0;
  double tolerance = 0.0;
  int checked = 0;
  std::vector<ReportDetail> details;
  /// Short human description of the identity being checked.
  std::string anchor;

  bool passed() const { return status == Status::Pass || status == Status::Skipped; }

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

namespace detail {

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline double from_finite_or_null(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace detail

inline void to_json(json& j, const ReportDetail& d) {
  j = json{{"description", d.description}, {"where", d.where}, {"observed", d.observed}, {"expected", d.expected}};
}

inline void from_json(const json& j, ReportDetail& d) {
  j.at("description").get_to(d.description);
  j.at("where").get_to(d.where);
  j.at("observed").get_to(d.observed);
  j.at("expected").get_to(d.expected);
}

inline void to_json(json& j, const VerificationReport& r) {
  j = json{{"check_name", r.check_name},
           {"status", to_string(r.status)},
           {"max_error", detail::finite_or_null(r.max_error)},
           {"tolerance", r.tolerance},
           {"checked", r.checked},
           {"details", r.details},
           {"anchor", r.anchor}};
}

inline void from_json(const json& j, VerificationReport& r) {
  j.at("check_name").get_to(r.check_name);
  r.status = status_from_string(j.at("status").get<std::string>());
  r.max_error = detail::from_finite_or_null(j.at("max_error"));
  j.at("tolerance").get_to(r.tolerance);
  j.at("checked").get_to(r.checked);
  j.at("details").get_to(r.details);
  j.at("anchor").get_to(r.anchor);
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

inline std::string fmt(cplx v) {
  std::ostringstream os;
  os.precision(12);
  os << v.real() << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i";
  return os.str();
}

/// Accumulates measurements into a report. Measurements above tolerance and
/// failed checks are recorded as details; notes never change the status.
class ReportBuilder {
 public:
  ReportBuilder(std::string name, double tolerance, std::string anchor) {
    r_.check_name = std::move(name);
    r_.tolerance = tolerance;
    r_.anchor = std::move(anchor);
  }

  /// Records a numeric discrepancy; fails when it exceeds the tolerance.
  bool measure(double err, const std::string& description, const std::string& where = "",
               const std::string& observed = "", const std::string& expected = "") {
    if (!(err == err)) err = std::numeric_limits<double>::infinity();
    ++r_.checked;
    r_.max_error = std::max(r_.max_error, err);
    const bool ok = err <= r_.tolerance;
    if (!ok) {
      failed_ = true;
      r_.details.push_back({description, where, observed.empty() ? fmt(err) : observed, expected});
    }
    return ok;
  }

  bool check(bool ok, const std::string& description, const std::string& where = "", const std::string& observed = "",
             const std::string& expected = "") {
    ++r_.checked;
    if (!ok) {
      failed_ = true;
      r_.details.push_back({description, where, observed, expected});
    }
    return ok;
  }

  void undecided(const std::string& description, const std::string& where = "", const std::string& observed = "") {
    undecided_ = true;
    r_.details.push_back({description, where, observed, ""});
  }

  void note(const std::string& description, const std::string& observed = "", const std::string& expected = "") {
    r_.details.push_back({"note: " + description, "", observed, expected});
  }

  /// An exception inside the check body.
  void crash(const std::string& what) {
    failed_ = true;
    r_.max_error = std::numeric_limits<double>::infinity();
    r_.details.push_back({"exception", "", what, ""});
  }

  VerificationReport finish() const {
    VerificationReport out = r_;
    out.status = failed_ ? Status::Fail : undecided_ ? Status::Undecided : Status::Pass;
    return out;
  }

 private:
  VerificationReport r_;
  bool failed_ = false;
  bool undecided_ = false;
};

inline VerificationReport skipped_report(std::string name, std::string anchor, std::string reason) {
  VerificationReport r;
  r.check_name = std::move(name);
  r.status = Status::Skipped;
  r.anchor = std::move(anchor);
  r.details.push_back({"skipped", "", reason, ""});
  return r;
}

/// Runs `body` against a fresh builder; exceptions become a failing entry.
template <class Body>
VerificationReport run_check(std::string name, double tolerance, std::string anchor, Body&& body) {
  ReportBuilder b(std::move(name), tolerance, std::move(anchor));
  try {
    body(b);
  } catch (const std::exception& err) {
    b.crash(err.what());
  }
  return b.finish();
}

}  // namespace bkc
