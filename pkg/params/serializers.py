# params/serializers.py

import math

from rest_framework import serializers


class ComplexField(serializers.Field):
    """Complex numbers travel as [re, im] pairs"""

    default_error_messages = {
        'invalid': 'Expected a number, a complex literal such as "0.5+0.8j", or an [re, im] pair.',
        'not_finite': 'Complex value must be finite.',
    }

    def to_representation(self, value):
        value = complex(value)
        return [value.real, value.imag]

    def to_internal_value(self, data):
        try:
            if isinstance(data, (list, tuple)):
                if len(data) != 2:
                    raise ValueError
                value = complex(float(data[0]), float(data[1]))
            elif isinstance(data, str):
                value = complex(data.replace(' ', '').replace('i', 'j'))
            else:
                value = complex(data)
        except (TypeError, ValueError):
            self.fail('invalid')
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            self.fail('not_finite')
        return value


class RegimeParamsSerializer(serializers.Serializer):
    """Read-only serializer for RegimeParams"""

    regime = serializers.SerializerMethodField()
    tau = ComplexField()
    omega = ComplexField()
    omega_p = ComplexField()
    omega_pp = ComplexField()
    q = ComplexField()
    q_tilde = ComplexField()
    mu = serializers.FloatField()

    def get_regime(self, obj):
        return obj.regime.value


class SpinSerializer(serializers.Serializer):
    """Read-only serializer for Spin"""

    convention = serializers.SerializerMethodField()
    a = ComplexField()
    Z = ComplexField()
    Z_tilde = ComplexField()
    n = serializers.IntegerField(allow_null=True)

    def get_convention(self, obj):
        return obj.convention.value


def params_payload(params, spin=None):
    """Single JSON object describing the parameter set and, optionally, the spin"""
    payload = dict(RegimeParamsSerializer(params).data)
    if spin is not None:
        payload.update(SpinSerializer(spin).data)
    return payload
