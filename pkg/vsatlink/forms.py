"""Per-section validation of scenario files.

Field names match the dataclass fields they feed, so cleaned_data goes
straight into the constructor.
"""

from django import forms
from django.core.exceptions import ValidationError

from .channel import MODES


def positive(value):
    if value is not None and not value > 0:
        raise ValidationError("must be positive")


def below_one(value):
    if value is not None and not value < 1:
        raise ValidationError("must be less than 1")


class ModemForm(forms.Form):
    m_ary = forms.IntegerField(min_value=4)
    min_distance = forms.FloatField(validators=[positive])
    gray_coding = forms.BooleanField(required=False)
    rolloff = forms.FloatField(max_value=1, validators=[positive])
    samples_per_symbol = forms.IntegerField(min_value=2)
    filter_span_symbols = forms.IntegerField(min_value=2)
    bit_sample_time_s = forms.FloatField(validators=[positive])
    frame_len = forms.IntegerField(min_value=1)

    def clean_m_ary(self):
        m = self.cleaned_data["m_ary"]
        bits = m.bit_length() - 1
        if m & (m - 1) or bits % 2:
            raise ValidationError("must be a power of 4 (square QAM)")
        return m

    def clean_filter_span_symbols(self):
        span = self.cleaned_data["filter_span_symbols"]
        if span % 2:
            raise ValidationError("must be even")
        return span

    def clean(self):
        cleaned = super().clean()
        m, frame_len = cleaned.get("m_ary"), cleaned.get("frame_len")
        if m and frame_len and frame_len % (m.bit_length() - 1):
            self.add_error("frame_len", "must be a whole number of symbols")
        return cleaned


class SalehForm(forms.Form):
    input_scale_db = forms.FloatField()
    amam_alpha = forms.FloatField()
    amam_beta = forms.FloatField(validators=[positive])
    ampm_alpha = forms.FloatField()
    ampm_beta = forms.FloatField(validators=[positive])
    output_scale_db = forms.FloatField()
    enabled = forms.BooleanField(required=False)


class GainsForm(forms.Form):
    tx_dish_gain_db = forms.FloatField()
    sat_rx_gain_db = forms.FloatField()
    # Left empty, the simulator closes the link itself.
    transponder_amp_gain_db = forms.FloatField(required=False)
    sat_tx_gain_db = forms.FloatField()
    rx_dish_gain_db = forms.FloatField()
    uplink_loss_db = forms.FloatField(min_value=0)
    downlink_loss_db = forms.FloatField(min_value=0)


class ImpairmentsForm(forms.Form):
    phase_offset_deg = forms.FloatField()
    freq_offset_hz = forms.FloatField()
    noise_temperature_k = forms.FloatField(min_value=0)
    iq_amplitude_imbalance_db = forms.FloatField()
    iq_phase_imbalance_deg = forms.FloatField()
    dc_offset_i = forms.FloatField()
    dc_offset_q = forms.FloatField()


class CompensationForm(forms.Form):
    dc = forms.BooleanField(required=False)
    agc = forms.BooleanField(required=False)
    phase_freq = forms.BooleanField(required=False)
    dc_forgetting_factor = forms.FloatField(validators=[positive, below_one])


class AgcForm(forms.Form):
    reference_power = forms.FloatField(required=False, validators=[positive])
    step_size = forms.FloatField(max_value=1, validators=[positive])
    max_gain_db = forms.FloatField()


class RunForm(forms.Form):
    mode = forms.ChoiceField(choices=[(m, m) for m in MODES])
    target_es_n0_db = forms.FloatField(required=False)
    total_bits = forms.IntegerField(min_value=10_000)
    seed = forms.IntegerField(min_value=0)
    p_one = forms.FloatField(min_value=0, max_value=1)
    psd_segment_len = forms.IntegerField(min_value=16)
    psd_overlap = forms.FloatField(min_value=0, validators=[below_one])
    constellation_points = forms.IntegerField(min_value=0)

    def clean(self):
        cleaned = super().clean()
        if cleaned.get("mode") == "normalized" and cleaned.get("target_es_n0_db") is None:
            self.add_error("target_es_n0_db", "required in normalized mode")
        return cleaned


class AntennaForm(forms.Form):
    diameter_m = forms.FloatField(validators=[positive])
    efficiency = forms.FloatField(max_value=1, validators=[positive])
    pointing_loss_db = forms.FloatField(min_value=0, required=False)


class BudgetLegForm(forms.Form):
    name = forms.CharField(max_length=64)
    tx_power_w = forms.FloatField(validators=[positive])
    tx_antenna_gain_db = forms.FloatField(required=False)
    rx_antenna_gain_db = forms.FloatField(required=False)
    range_m = forms.FloatField(validators=[positive])
    frequency_hz = forms.FloatField(validators=[positive])
    bandwidth_hz = forms.FloatField(validators=[positive])
    system_noise_temperature_k = forms.FloatField(validators=[positive])
    loss_override_db = forms.FloatField(min_value=0, required=False)
