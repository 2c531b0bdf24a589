#pragma once

#include <stdexcept>
#include <string>

namespace fuma {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

class SeriesTooShort : public Error {
public:
	using Error::Error;
};

class NonFiniteSimulation : public Error {
public:
	using Error::Error;
};

class MethodFailed : public Error {
public:
	MethodFailed(std::string method, const std::string &reason)
		: Error(method + ": " + reason), method_(std::move(method)) {}

	const std::string &method() const noexcept { return method_; }

private:
	std::string method_;
};

/// Scaling denominator of MSIS/MASE is zero (flat or perfectly periodic history).
class ZeroDenominator : public Error {
public:
	using Error::Error;
};

class RegistryMismatch : public Error {
public:
	using Error::Error;
};

class UnknownFeature : public Error {
public:
	using Error::Error;
};

class LevelMismatch : public Error {
public:
	using Error::Error;
};

class IdMismatch : public Error {
public:
	using Error::Error;
};

class InsufficientData : public Error {
public:
	using Error::Error;
};

/// Malformed input files or arguments that are well-formed but semantically invalid.
class DataError : public Error {
public:
	using Error::Error;
};

/// Too many series of one frequency failed during training.
class SystemicFailure : public Error {
public:
	using Error::Error;
};

} // namespace fuma
