from wgplate.session import Session
from wgplate.study import StudyConfig, parse_study
