from abc import ABC, abstractmethod
import json

from pandas import DataFrame

from wgplate.exceptions import WgplateInternalError


class AbstractDisplay(ABC):
    @abstractmethod
    def to_string(self):
        pass

    @abstractmethod
    def to_json(self):
        pass

    @abstractmethod
    def to_dict(self):
        pass


class DisplayDataframe(AbstractDisplay):
    def __init__(self, data):
        if isinstance(data, DataFrame):
            self.dataframe = data
        else:
            try:
                self.dataframe = DataFrame(data)
            except ValueError:
                raise WgplateInternalError("invalid input to DisplayDataframe object")

    def to_string(self):
        return self.dataframe.to_string(index=False, na_rep="")

    def to_csv(self):
        return self.dataframe.to_csv(index=False, float_format="%.16g", na_rep="")

    def to_json(self):
        return json.dumps(self.to_dict(), default=str)

    def to_dict(self):
        body = self.dataframe.astype(object).where(self.dataframe.notna(), None).to_dict(orient="records")
        msg = {"display": "dataframe", "data": body}
        return msg


class DisplayStudySummary(DisplayDataframe):
    def __init__(self, title, data, exec_time_sec, footnotes=()):
        self.title = title
        self.exec_time_sec = exec_time_sec
        self.footnotes = list(footnotes)
        super().__init__(data)
        self.exec_time_str = self._cal_exec_time(exec_time_sec)

    def to_string(self):
        header = f"[SUMMARY] {self.title} finished in {self.exec_time_str}"
        body = super().to_string()
        return "\n".join([header, body] + self.footnotes)

    def to_dict(self):
        msg = {
            "display": "study summary",
            "data": {
                "title": self.title,
                "execution time": self.exec_time_sec,
                "table": super().to_dict()["data"],
                "footnotes": self.footnotes,
            },
        }
        return msg

    def _cal_exec_time(self, exec_time_sec):
        exec_time_sec = int(round(exec_time_sec))
        hours = exec_time_sec // 3600
        mins = (exec_time_sec // 60) % 60
        secs = exec_time_sec % 60
        x = f"{hours} hours, " if hours else ""
        x = f"{x}{mins} minutes, " if x or mins else ""
        x = f"{x}{secs} seconds"
        return x


class DisplayDict(AbstractDisplay):
    def __init__(self, d):
        self.dict = d
        self.dataframe = DataFrame([(key, str(value)) for key, value in d.items()])

    def to_string(self):
        return self.dataframe.to_string(index=False, header=False, na_rep="")

    def to_json(self):
        return json.dumps(self.to_dict(), default=str)

    def to_dict(self):
        msg = {"display": "dict", "data": self.dict}
        return msg
